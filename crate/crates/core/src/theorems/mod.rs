//! Verifiers for the implications and finitistic dimension bounds that relate
//! `A`, the corner `B = eAe` and the quotient `Ā = A/AeA`.
//!
//! Every check reports an [`ImplicationStatus`]. A lemma whose hypotheses were
//! verified but whose conclusion failed is reported as
//! [`ImplicationStatus::Contradiction`]; callers treat that as a hard error.

mod bounds;
mod fdim;
mod lemmas;
mod stratified;

use std::fmt;

use serde::Serialize;

use crate::algebra::AlgebraRef;
use crate::exactlin::Field;
use crate::ideals::IdealContext;
use crate::modules::{quotient_module, radical_columns, simple, submodule, syzygy_n, projective, Module};

pub use bounds::*;
pub use fdim::*;
pub use lemmas::*;
pub use stratified::*;

/// Outcome of checking one implication on concrete inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ImplicationStatus {
    /// A hypothesis fails at the given degree; the conclusion is not required.
    HypothesisRefuted { degree: usize, detail: String },
    /// Hypotheses and conclusion hold. `certified` is false when some part
    /// was only checked through the cutoff.
    Verified { certified: bool },
    /// The data computed within the cutoff cannot decide the implication.
    UnknownInputs { detail: String },
    /// Hypotheses verified, conclusion refuted.
    Contradiction { detail: String },
}

impl ImplicationStatus {
    pub fn is_hard_error(&self) -> bool {
        matches!(self, ImplicationStatus::Contradiction { .. })
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, ImplicationStatus::Verified { .. })
    }

    pub fn is_hypothesis_refuted(&self) -> bool {
        matches!(self, ImplicationStatus::HypothesisRefuted { .. })
    }
}

impl fmt::Display for ImplicationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImplicationStatus::HypothesisRefuted { degree, detail } => {
                write!(f, "hypothesis refuted at degree {degree}: {detail}")
            }
            ImplicationStatus::Verified { certified: true } => write!(f, "implication verified"),
            ImplicationStatus::Verified { certified: false } => {
                write!(f, "implication verified through the cutoff")
            }
            ImplicationStatus::UnknownInputs { detail } => write!(f, "unknown inputs: {detail}"),
            ImplicationStatus::Contradiction { detail } => write!(f, "CONTRADICTION: {detail}"),
        }
    }
}

/// A module together with the name it is reported under.
pub type Named<F> = (String, Module<F>);

/// Simples, radicals of indecomposable projectives, and their syzygies up to
/// depth 3, skipping zero modules. Names follow the CLI module syntax.
pub fn base_battery<F: Field>(a: &AlgebraRef<F>) -> Vec<Named<F>> {
    let mut seeds: Vec<Named<F>> = Vec::new();
    for (v, label) in a.vertex_labels().iter().enumerate() {
        seeds.push((format!("S{label}"), simple(a, v)));
    }
    for (v, label) in a.vertex_labels().iter().enumerate() {
        let p = projective(a, v);
        let (rad, _) = submodule(&p, &radical_columns(&p)).expect("radical is a submodule");
        if !rad.is_zero() {
            seeds.push((format!("radP{label}"), rad));
        }
    }
    let mut out = Vec::new();
    for (name, m) in seeds {
        out.push((name.clone(), m.clone()));
        for n in 1..=3 {
            let omega = syzygy_n(&m, n);
            if omega.is_zero() {
                break;
            }
            out.push((format!("Omega{n}({name})"), omega));
        }
    }
    out
}

/// [`base_battery`] followed by the nonzero traces `AeX` and quotients
/// `X/AeX` of its members.
pub fn standard_battery<F: Field>(ctx: &IdealContext<F>) -> Vec<Named<F>> {
    let base = base_battery(&ctx.a);
    let mut extra = Vec::new();
    for (name, m) in &base {
        let (t, incl) = ctx.trace(m).expect("trace of a module over the context algebra");
        let (q, _) = quotient_module(m, &incl).expect("trace inclusion is injective");
        if !t.is_zero() && t.dim() < m.dim() {
            extra.push((format!("trace({name})"), t));
        }
        if !q.is_zero() && q.dim() < m.dim() {
            extra.push((format!("quot({name})"), q));
        }
    }
    let mut out = base;
    out.extend(extra);
    out
}

#[cfg(test)]
mod tests;
