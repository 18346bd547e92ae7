//! The finitistic dimension bounds, evaluated on concrete witness modules.
//!
//! A bound's right side is assembled from projective dimension verdicts and
//! fdim certificates. Each witness `X` with `pd_A(X) = d` finite is compared
//! against it; since fdim is a supremum over such modules, `d > rhs` with
//! certified inputs would refute the bound.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exactlin::Field;
use crate::homology::{minimal_resolution, proj_dim, tor_dims, DimVerdict, Verdict};
use crate::ideals::{strongly_idempotent_report, ContextSummary, IdealContext};
use crate::modules::{annihilated_by, dual, is_projective};

use super::{FdimCertificate, Named};

/// The six inequalities, numbered as reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    /// `fdim(A) <= max{2 fdim(B) + 1, pd_A(AeA) + fdim(B) + fdim(Ā) + 2}`
    MaxForm,
    /// `fdim(A) <= 2 fdim(B) + fdim(Ā) + 2`
    TwiceCorner,
    /// `fdim(A) <= pd_{A^op}(AeA) + fdim(B) + fdim(Ā) + 2`
    RightIdeal,
    /// `fidim(A) <= pd_A(AeA) + fidim(B) + fidim(Ā) + 2`
    Injective,
    /// `fdim_A(Ā) <= fdim(Ā) + fdim(B) + 1`
    QuotientModules,
    /// `fdim(A) <= fdim(Ā) + 2` for primitive `e` with `AeA` projective
    Primitive,
}

impl Bound {
    pub const ALL: [Bound; 6] = [
        Bound::MaxForm,
        Bound::TwiceCorner,
        Bound::RightIdeal,
        Bound::Injective,
        Bound::QuotientModules,
        Bound::Primitive,
    ];

    pub fn id(self) -> u8 {
        match self {
            Bound::MaxForm => 1,
            Bound::TwiceCorner => 2,
            Bound::RightIdeal => 3,
            Bound::Injective => 4,
            Bound::QuotientModules => 5,
            Bound::Primitive => 6,
        }
    }

    pub fn from_id(id: u8) -> Option<Bound> {
        Bound::ALL.into_iter().find(|b| b.id() == id)
    }

    pub fn statement(self) -> &'static str {
        match self {
            Bound::MaxForm => "fdim(A) <= max{2 fdim(B) + 1, pd_A(AeA) + fdim(B) + fdim(Ā) + 2}",
            Bound::TwiceCorner => "fdim(A) <= 2 fdim(B) + fdim(Ā) + 2",
            Bound::RightIdeal => "fdim(A) <= pd_{A^op}(AeA) + fdim(B) + fdim(Ā) + 2",
            Bound::Injective => "fidim(A) <= pd_A(AeA) + fidim(B) + fidim(Ā) + 2",
            Bound::QuotientModules => "fdim_A(Ā) <= fdim(Ā) + fdim(B) + 1",
            Bound::Primitive => "fdim(A) <= fdim(Ā) + 2",
        }
    }

    /// Names of the right-side terms, in the order [`Bound::rhs`] takes them.
    pub fn term_names(self) -> &'static [&'static str] {
        match self {
            Bound::MaxForm => &["pd_A(AeA)", "fdim(B)", "fdim(Ā)"],
            Bound::TwiceCorner => &["fdim(B)", "fdim(Ā)"],
            Bound::RightIdeal => &["pd_{A^op}(AeA)", "fdim(B)", "fdim(Ā)"],
            Bound::Injective => &["pd_A(AeA)", "fidim(B)", "fidim(Ā)"],
            Bound::QuotientModules => &["fdim(Ā)", "fdim(B)"],
            Bound::Primitive => &["fdim(Ā)"],
        }
    }

    /// The right side as a function of its terms.
    pub fn rhs(self, t: &[usize]) -> usize {
        match self {
            Bound::MaxForm => (2 * t[1] + 1).max(t[0] + t[1] + t[2] + 2),
            Bound::TwiceCorner => 2 * t[0] + t[1] + 2,
            Bound::RightIdeal | Bound::Injective => t[0] + t[1] + t[2] + 2,
            Bound::QuotientModules => t[0] + t[1] + 1,
            Bound::Primitive => t[0] + 2,
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Certified,
    /// Not refuted, but only checked through the cutoff.
    Unknown,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisLine {
    pub name: String,
    pub status: HypothesisStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhsTerm {
    pub name: String,
    pub value: Option<usize>,
    pub provenance: String,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    Holds,
    HoldsConditionally,
    /// The inequality fails with every input certified.
    Violated,
    /// The inequality fails, but some input is uncertified.
    ExceedsUncertified,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessLine {
    pub module: String,
    pub lhs: DimVerdict,
    pub holds: Option<bool>,
    pub status: WitnessStatus,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub bound_id: Bound,
    pub statement: String,
    pub context: ContextSummary,
    pub hypotheses: Vec<HypothesisLine>,
    /// All hypotheses are certified or unknown; none refuted.
    pub applicable: bool,
    pub rhs_terms: Vec<RhsTerm>,
    pub rhs: Option<usize>,
    pub witnesses: Vec<WitnessLine>,
    /// Raising any single right-side term never lowers the right side.
    pub monotone: bool,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn violations(&self) -> usize {
        self.witnesses.iter().filter(|w| w.status == WitnessStatus::Violated).count()
    }

    pub fn count(&self, status: WitnessStatus) -> usize {
        self.witnesses.iter().filter(|w| w.status == status).count()
    }
}

/// Certificates feeding the right sides. `fidim_*` are fdim certificates of
/// the opposite algebras.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundInputs {
    pub fdim_b: Option<FdimCertificate>,
    pub fdim_abar: Option<FdimCertificate>,
    pub fidim_b: Option<FdimCertificate>,
    pub fidim_abar: Option<FdimCertificate>,
}

impl BoundInputs {
    /// Automatic certificates (see [`super::auto_certificate`]) for the
    /// corner and quotient algebras and their opposites.
    pub fn automatic<F: Field>(ctx: &IdealContext<F>, cutoff: usize) -> BoundInputs {
        BoundInputs {
            fdim_b: super::auto_certificate(&ctx.b, cutoff),
            fdim_abar: super::auto_certificate(&ctx.abar, cutoff),
            fidim_b: super::auto_certificate(&ctx.b.opposite_ref(), cutoff),
            fidim_abar: super::auto_certificate(&ctx.abar.opposite_ref(), cutoff),
        }
    }
}

/// Data shared by all bounds on one context.
struct Shared {
    summary: ContextSummary,
    si: Verdict,
    pd_left: DimVerdict,
    pd_right: DimVerdict,
    aea_projective: bool,
    single_vertex: bool,
    witnesses: Vec<(String, DimVerdict, bool)>,
}

/// Strong idempotency is left-right symmetric, and either side may be the one
/// that decides it within the cutoff, so an undecided answer is retried on
/// the opposite context.
pub fn two_sided_strong_idempotency<F: Field>(ctx: &IdealContext<F>, cutoff: usize) -> Result<Verdict> {
    let direct = strongly_idempotent_report(ctx, cutoff)?.verdict;
    if !direct.is_unknown() {
        return Ok(direct);
    }
    let op = strongly_idempotent_report(&ctx.opposite()?, cutoff)?.verdict;
    Ok(if op.is_unknown() { direct } else { op })
}

fn shared<F: Field>(ctx: &IdealContext<F>, witnesses: &[Named<F>], cutoff: usize) -> Result<Shared> {
    let si = two_sided_strong_idempotency(ctx, cutoff)?;
    let lines = witnesses
        .par_iter()
        .map(|(name, m)| (name.clone(), proj_dim(m, cutoff), annihilated_by(m, &ctx.subset)))
        .collect();
    Ok(Shared {
        summary: ctx.summary(),
        si,
        pd_left: proj_dim(&ctx.aea_left, cutoff),
        pd_right: proj_dim(&ctx.aea_right, cutoff),
        aea_projective: is_projective(&ctx.aea_left),
        single_vertex: ctx.subset.len() == 1,
        witnesses: lines,
    })
}

fn si_line(v: &Verdict) -> HypothesisLine {
    let status = match v {
        Verdict::Proven => HypothesisStatus::Certified,
        Verdict::Refuted { .. } => HypothesisStatus::Refuted,
        Verdict::UnknownUpTo { .. } => HypothesisStatus::Unknown,
    };
    HypothesisLine {
        name: "AeA is strongly idempotent".into(),
        status,
        detail: v.to_string(),
    }
}

fn pd_line(name: &str, v: &DimVerdict) -> HypothesisLine {
    HypothesisLine {
        name: format!("{name} is finite"),
        status: if v.is_finite() {
            HypothesisStatus::Certified
        } else {
            HypothesisStatus::Unknown
        },
        detail: v.to_string(),
    }
}

fn pd_term(name: &str, v: &DimVerdict) -> RhsTerm {
    RhsTerm {
        name: name.into(),
        value: v.exact(),
        provenance: format!("minimal resolution: {v}"),
        certified: v.is_finite(),
    }
}

fn cert_term(name: &str, c: Option<&FdimCertificate>) -> RhsTerm {
    match c {
        Some(c) => RhsTerm {
            name: name.into(),
            value: Some(c.value),
            provenance: format!(
                "{} certificate for {}{}",
                match c.method {
                    super::FdimMethod::LocalZero => "LocalZero",
                    super::FdimMethod::GlobalDimBound { .. } => "GlobalDimBound",
                    super::FdimMethod::ExhaustiveSearch { .. } => "ExhaustiveSearch (lower bound)",
                    super::FdimMethod::UserAsserted => "UserAsserted (unverified)",
                },
                c.algebra,
                if c.certified { "" } else { "; uncertified" }
            ),
            certified: c.certified,
        },
        None => RhsTerm {
            name: name.into(),
            value: None,
            provenance: "no certificate".into(),
            certified: false,
        },
    }
}

fn assemble(bound: Bound, sh: &Shared, fdim_b: Option<&FdimCertificate>, fdim_abar: Option<&FdimCertificate>) -> BoundReport {
    let names = bound.term_names();
    let mut hypotheses = Vec::new();
    let mut rhs_terms = Vec::new();
    match bound {
        Bound::MaxForm | Bound::TwiceCorner | Bound::Injective => {
            hypotheses.push(si_line(&sh.si));
            hypotheses.push(pd_line("pd_A(AeA)", &sh.pd_left));
        }
        Bound::RightIdeal => {
            hypotheses.push(si_line(&sh.si));
            hypotheses.push(pd_line("pd_{A^op}(AeA)", &sh.pd_right));
        }
        Bound::QuotientModules => hypotheses.push(si_line(&sh.si)),
        Bound::Primitive => {
            hypotheses.push(HypothesisLine {
                name: "e is primitive".into(),
                status: if sh.single_vertex {
                    HypothesisStatus::Certified
                } else {
                    HypothesisStatus::Refuted
                },
                detail: format!("E = {:?}", sh.summary.subset),
            });
            hypotheses.push(HypothesisLine {
                name: "AeA is projective as a left module".into(),
                status: if sh.aea_projective {
                    HypothesisStatus::Certified
                } else {
                    HypothesisStatus::Refuted
                },
                detail: format!("pd_A(AeA) = {}", sh.pd_left),
            });
        }
    }
    for &name in names {
        let term = match name {
            "pd_A(AeA)" => pd_term(name, &sh.pd_left),
            "pd_{A^op}(AeA)" => pd_term(name, &sh.pd_right),
            "fdim(B)" | "fidim(B)" => cert_term(name, fdim_b),
            _ => cert_term(name, fdim_abar),
        };
        rhs_terms.push(term);
    }
    let applicable = hypotheses.iter().all(|h| h.status != HypothesisStatus::Refuted);
    let values: Option<Vec<usize>> = rhs_terms.iter().map(|t| t.value).collect();
    let rhs = values.as_ref().map(|v| bound.rhs(v));
    let monotone = values.as_ref().map_or(true, |v| {
        (0..v.len()).all(|i| {
            (1..=3).all(|delta| {
                let mut w = v.clone();
                w[i] += delta;
                bound.rhs(&w) >= bound.rhs(v)
            })
        })
    });
    let all_certified = hypotheses.iter().all(|h| h.status == HypothesisStatus::Certified)
        && rhs_terms.iter().all(|t| t.certified);
    let mut caveats_common: Vec<String> = hypotheses
        .iter()
        .filter(|h| h.status == HypothesisStatus::Unknown)
        .map(|h| format!("{}: {}", h.name, h.detail))
        .collect();
    caveats_common.extend(
        rhs_terms
            .iter()
            .filter(|t| !t.certified)
            .map(|t| format!("{}: {}", t.name, t.provenance)),
    );
    let witnesses = sh
        .witnesses
        .iter()
        .map(|(name, pd, killed)| {
            let mut caveats = Vec::new();
            let skip = |reason: String| WitnessLine {
                module: name.clone(),
                lhs: *pd,
                holds: None,
                status: WitnessStatus::Skipped,
                caveats: vec![reason],
            };
            if !applicable {
                return skip("a hypothesis of the bound is refuted".into());
            }
            if bound == Bound::QuotientModules && !killed {
                return skip("not annihilated by e".into());
            }
            let Some(d) = pd.exact() else {
                return skip(format!("projective dimension {pd}"));
            };
            let Some(r) = rhs else {
                return skip("right side is not determined".into());
            };
            caveats.extend(caveats_common.iter().cloned());
            let holds = d <= r;
            let status = match (holds, all_certified) {
                (true, true) => WitnessStatus::Holds,
                (true, false) => WitnessStatus::HoldsConditionally,
                (false, true) => WitnessStatus::Violated,
                (false, false) => WitnessStatus::ExceedsUncertified,
            };
            WitnessLine {
                module: name.clone(),
                lhs: *pd,
                holds: Some(holds),
                status,
                caveats,
            }
        })
        .collect();
    BoundReport {
        bound_id: bound,
        statement: bound.statement().into(),
        context: sh.summary.clone(),
        hypotheses,
        applicable,
        rhs_terms,
        rhs,
        witnesses,
        monotone,
        notes: Vec::new(),
    }
}

/// Reports for the requested bounds. The injective bound is evaluated as the
/// right-ideal bound on the opposite context, with the duals of the witnesses
/// and the certificates of the opposite algebras.
pub fn bound_reports<F: Field>(
    ctx: &IdealContext<F>,
    bounds: &[Bound],
    witnesses: &[Named<F>],
    inputs: &BoundInputs,
    cutoff: usize,
) -> Result<Vec<BoundReport>> {
    let needs_direct = bounds.iter().any(|&b| b != Bound::Injective);
    let sh = if needs_direct {
        Some(shared(ctx, witnesses, cutoff)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for &b in bounds {
        let report = match b {
            Bound::Injective => injective_bound(ctx, witnesses, inputs, cutoff)?,
            _ => {
                let sh = sh.as_ref().expect("shared data");
                let mut r = assemble(b, sh, inputs.fdim_b.as_ref(), inputs.fdim_abar.as_ref());
                if b == Bound::QuotientModules {
                    r.notes = prior_bound_notes(&r, inputs.fdim_b.as_ref());
                }
                r
            }
        };
        out.push(report);
    }
    Ok(out)
}

pub fn bound_report<F: Field>(
    ctx: &IdealContext<F>,
    bound: Bound,
    witnesses: &[Named<F>],
    inputs: &BoundInputs,
    cutoff: usize,
) -> Result<BoundReport> {
    Ok(bound_reports(ctx, &[bound], witnesses, inputs, cutoff)?.remove(0))
}

fn injective_bound<F: Field>(
    ctx: &IdealContext<F>,
    witnesses: &[Named<F>],
    inputs: &BoundInputs,
    cutoff: usize,
) -> Result<BoundReport> {
    let op = ctx.opposite()?;
    let duals: Vec<Named<F>> = witnesses
        .iter()
        .map(|(name, m)| (format!("D({name})"), dual(m)))
        .collect();
    let sh = shared(&op, &duals, cutoff)?;
    let mut r = assemble(Bound::RightIdeal, &sh, inputs.fidim_b.as_ref(), inputs.fidim_abar.as_ref());
    r.bound_id = Bound::Injective;
    r.statement = Bound::Injective.statement().into();
    // pd over (A^op)^op of AeA is pd_A(AeA); the certificates are fdim of
    // the opposite algebras, i.e. fidim
    for (t, name) in r.rhs_terms.iter_mut().zip(Bound::Injective.term_names()) {
        t.name = (*name).into();
    }
    for h in r.hypotheses.iter_mut() {
        if h.name.starts_with("pd_{A^op}(AeA)") {
            h.name = "pd_A(AeA) is finite".into();
        }
    }
    r.notes.push("evaluated on A^op: lhs of D(X) is pd_{A^op}(D X) = injdim_A(X)".into());
    Ok(r)
}

/// The quantity `d = sup{pd_A(X) | eX = 0}` only has a lower bound from the
/// witnesses; report it with the bound `fdim(B) + d + 1` from prior work.
fn prior_bound_notes(r: &BoundReport, fdim_b: Option<&FdimCertificate>) -> Vec<String> {
    let d = r
        .witnesses
        .iter()
        .filter(|w| w.holds.is_some())
        .filter_map(|w| w.lhs.exact())
        .max();
    match (d, fdim_b) {
        (Some(d), Some(b)) => vec![
            format!("d = sup{{pd_A(X) | eX = 0}} >= {d} over the witnesses"),
            format!("prior bound fdim(B) + d + 1 >= {}", b.value + d + 1),
        ],
        _ => vec!["d = sup{pd_A(X) | eX = 0} has no finite witness".into()],
    }
}

/// One witness in [`general_hypothesis_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralWitness {
    pub module: String,
    pub pd: DimVerdict,
    /// `Tor_k^B(Ae, eX) = 0` for `n + 1 <= k <= cutoff`.
    pub hypothesis: Verdict,
    pub holds: Option<bool>,
    pub status: WitnessStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralReport {
    pub n: usize,
    pub standing: Verdict,
    /// `pd_{B^op}(Ae)`; when it is at most `n` the hypothesis holds for
    /// every module.
    pub pd_ae: DimVerdict,
    pub global_hypothesis: bool,
    pub rhs_terms: Vec<RhsTerm>,
    pub rhs: Option<usize>,
    pub witnesses: Vec<GeneralWitness>,
}

/// `fdim(A) <= n + fdim(B) + fdim(Ā) + 2` when `Tor_k^B(Ae, eX) = 0` for
/// every finite-pd `X` and every `k >= n + 1`.
pub fn general_hypothesis_check<F: Field>(
    ctx: &IdealContext<F>,
    witnesses: &[Named<F>],
    n: usize,
    inputs: &BoundInputs,
    cutoff: usize,
) -> Result<GeneralReport> {
    let standing = two_sided_strong_idempotency(ctx, cutoff)?;
    let pd_ae = proj_dim(&ctx.ae_b, cutoff);
    let global_hypothesis = pd_ae.exact().is_some_and(|p| p <= n);
    let rhs_terms = vec![
        cert_term("fdim(B)", inputs.fdim_b.as_ref()),
        cert_term("fdim(Ā)", inputs.fdim_abar.as_ref()),
    ];
    let rhs = match (rhs_terms[0].value, rhs_terms[1].value) {
        (Some(b), Some(q)) => Some(n + b + q + 2),
        _ => None,
    };
    let certified = global_hypothesis && standing.is_proven() && rhs_terms.iter().all(|t| t.certified);
    let lines: Vec<Result<GeneralWitness>> = witnesses
        .par_iter()
        .map(|(name, m)| {
            let pd = proj_dim(m, cutoff);
            let res = minimal_resolution(&ctx.restrict(m)?, cutoff + 1);
            let tor = tor_dims(&ctx.ae_b, &res)?;
            let bad = (n + 1..=cutoff).find(|&k| tor.get(k).copied().unwrap_or(0) != 0);
            let hypothesis = match bad {
                Some(k) => Verdict::Refuted {
                    degree: k,
                    witness: format!("dim Tor_{k}^B(Ae, eX) = {}", tor[k]),
                },
                None if res.terminated => Verdict::Proven,
                None => Verdict::UnknownUpTo { cutoff },
            };
            let (holds, status) = match (pd.exact(), rhs, &hypothesis) {
                (Some(d), Some(r), h) if !h.is_refuted() && !standing.is_refuted() => {
                    let holds = d <= r;
                    let status = match (holds, certified) {
                        (true, true) => WitnessStatus::Holds,
                        (true, false) => WitnessStatus::HoldsConditionally,
                        (false, true) => WitnessStatus::Violated,
                        (false, false) => WitnessStatus::ExceedsUncertified,
                    };
                    (Some(holds), status)
                }
                _ => (None, WitnessStatus::Skipped),
            };
            Ok(GeneralWitness {
                module: name.clone(),
                pd,
                hypothesis,
                holds,
                status,
            })
        })
        .collect();
    Ok(GeneralReport {
        n,
        standing,
        pd_ae,
        global_hypothesis,
        rhs_terms,
        rhs,
        witnesses: lines.into_iter().collect::<Result<_>>()?,
    })
}
