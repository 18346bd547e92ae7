use std::fmt;

use serde::{Deserialize, Serialize};

/// Evidence that the syzygies of a resolution repeat: the dimension vectors
/// and tops of `Ω^{lag+i}` and `Ω^{lag+period+i}` agree for `i < period`.
/// Heuristic only; it does not prove infinite projective dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCert {
    pub lag: usize,
    pub period: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum DimKind {
    Exactly(usize),
    /// No termination by the cutoff; the dimension is at least this.
    AtLeast(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimVerdict {
    pub kind: DimKind,
    pub certificate: Option<PeriodCert>,
}

impl DimVerdict {
    pub fn exactly(d: usize) -> Self {
        DimVerdict {
            kind: DimKind::Exactly(d),
            certificate: None,
        }
    }

    pub fn at_least(n: usize, certificate: Option<PeriodCert>) -> Self {
        DimVerdict {
            kind: DimKind::AtLeast(n),
            certificate,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match self.kind {
            DimKind::Exactly(d) => Some(d),
            DimKind::AtLeast(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.exact().is_some()
    }

    /// The verdict for `Ω^n` of a module with this verdict.
    pub fn shift(&self, n: usize) -> DimVerdict {
        match self.kind {
            DimKind::Exactly(d) => DimVerdict::exactly(d.saturating_sub(n)),
            DimKind::AtLeast(m) => DimVerdict::at_least(m.saturating_sub(n), None),
        }
    }
}

impl fmt::Display for DimVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DimKind::Exactly(d) => write!(f, "{d}"),
            DimKind::AtLeast(n) => {
                write!(f, ">= {n} (not terminated by degree {})", n.saturating_sub(1))?;
                if let Some(c) = self.certificate {
                    write!(
                        f,
                        "; syzygies repeat with lag {} and period {} (heuristic)",
                        c.lag, c.period
                    )?;
                }
                Ok(())
            }
        }
    }
}

/// A certified answer to a question quantified over all degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Proven,
    Refuted { degree: usize, witness: String },
    UnknownUpTo { cutoff: usize },
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::UnknownUpTo { .. })
    }

    /// Two verdicts contradict when one is proven and the other refuted.
    pub fn contradicts(&self, other: &Verdict) -> bool {
        (self.is_proven() && other.is_refuted()) || (self.is_refuted() && other.is_proven())
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proven => write!(f, "proven"),
            Verdict::Refuted { degree, witness } => write!(f, "refuted at degree {degree}: {witness}"),
            Verdict::UnknownUpTo { cutoff } => write!(f, "unknown (checked through degree {cutoff})"),
        }
    }
}
