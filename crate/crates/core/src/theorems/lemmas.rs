//! Implication checks for the lemmas about `P_e^∞`, traces and syzygies.
//!
//! Hypotheses quantified over all degrees can only be checked through a
//! cutoff `N`. The conclusions are then tested only in the range that the
//! truncated hypotheses actually imply, so a refutation in that range is a
//! genuine contradiction and anything beyond it is reported as unknown.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::homology::{minimal_resolution, proj_dim, tor_dims, DimVerdict, Verdict};
use crate::ideals::{pe_infty_check, pe_profile, pe_verdict, IdealContext};
use crate::modules::{annihilated_by, quotient_module, syzygy_n, Module, ModuleMap};

use super::{FdimCertificate, ImplicationStatus};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub membership: Verdict,
    pub pd_a: DimVerdict,
    pub pd_b: DimVerdict,
    pub status: ImplicationStatus,
}

/// For `m ∈ P_e^∞`, `pd_A(m) = pd_B(em)`.
///
/// When membership is only known through the cutoff `N`, the first `N + 1`
/// terms of the minimal resolution restrict to a minimal resolution of `em`,
/// so `pd_B(em) = d < N` would still be a contradiction.
pub fn pd_transfer_check<F: Field>(m: &Module<F>, ctx: &IdealContext<F>, cutoff: usize) -> Result<TransferReport> {
    let membership = pe_infty_check(m, ctx, cutoff)?;
    let pd_a = proj_dim(m, cutoff);
    let pd_b = proj_dim(&ctx.restrict(m)?, cutoff);
    let status = match &membership {
        Verdict::Refuted { degree, witness } => ImplicationStatus::HypothesisRefuted {
            degree: *degree,
            detail: format!("module is not in P_e^∞: {witness}"),
        },
        Verdict::Proven => match (pd_a.exact(), pd_b.exact()) {
            (Some(x), Some(y)) if x == y => ImplicationStatus::Verified { certified: true },
            _ => ImplicationStatus::Contradiction {
                detail: format!("module is in P_e^∞ but pd_A = {pd_a} and pd_B = {pd_b}"),
            },
        },
        Verdict::UnknownUpTo { .. } => match pd_b.exact() {
            Some(d) if d < cutoff => ImplicationStatus::Contradiction {
                detail: format!(
                    "resolution terms lie in add(Ae) through degree {cutoff} but pd_B(em) = {d}"
                ),
            },
            _ => ImplicationStatus::Verified { certified: false },
        },
    };
    Ok(TransferReport {
        membership,
        pd_a,
        pd_b,
        status,
    })
}

/// The standing assumption that `AeA` is strongly idempotent, as seen
/// through the cutoff.
fn standing<F: Field>(ctx: &IdealContext<F>, cutoff: usize) -> Result<Verdict> {
    super::two_sided_strong_idempotency(ctx, cutoff)
}

fn standing_refuted(v: &Verdict) -> Option<ImplicationStatus> {
    match v {
        Verdict::Refuted { degree, witness } => Some(ImplicationStatus::HypothesisRefuted {
            degree: *degree,
            detail: format!("AeA is not strongly idempotent: {witness}"),
        }),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// Strong idempotency of `AeA`, assumed throughout.
    pub standing: Verdict,
    pub hypothesis: Verdict,
    /// Membership verdict for the module the conclusion is about; absent when
    /// the hypotheses already failed.
    pub conclusion: Option<Verdict>,
    /// For the syzygy lemma: `(m, dim Tor_m^B(Ae, eX), dim Tor_m^A(AeA, X))`.
    pub identity: Vec<(usize, usize, usize)>,
    pub status: ImplicationStatus,
}

/// If `Tor_k^A(Ā, X) = 0` for all `k >= 1`, then `AeX ∈ P_e^∞`.
///
/// With the hypothesis and strong idempotency known through `N`, the long
/// exact sequence of `0 -> AeX -> X -> X/AeX -> 0` puts `AeX` in `P_e^N`.
pub fn lemma_aex_check<F: Field>(m: &Module<F>, ctx: &IdealContext<F>, cutoff: usize) -> Result<LemmaReport> {
    let standing = standing(ctx, cutoff)?;
    let tor = ctx.tor_abar(m, cutoff)?;
    let bad = (1..=cutoff).find(|&k| tor[k] != 0);
    let hypothesis = match bad {
        Some(k) => Verdict::Refuted {
            degree: k,
            witness: format!("dim Tor_{k}^A(Ā, X) = {}", tor[k]),
        },
        None if ctx.abar_right_resolution(cutoff + 1).terminated || minimal_resolution(m, cutoff).terminated => {
            Verdict::Proven
        }
        None => Verdict::UnknownUpTo { cutoff },
    };
    let mut report = LemmaReport {
        standing: standing.clone(),
        hypothesis: hypothesis.clone(),
        conclusion: None,
        identity: Vec::new(),
        status: ImplicationStatus::Verified { certified: false },
    };
    if let Some(s) = standing_refuted(&standing) {
        report.status = s;
        return Ok(report);
    }
    if let Verdict::Refuted { degree, witness } = &hypothesis {
        report.status = ImplicationStatus::HypothesisRefuted {
            degree: *degree,
            detail: witness.clone(),
        };
        return Ok(report);
    }
    let (trace, _) = ctx.trace(m)?;
    let conclusion = pe_infty_check(&trace, ctx, cutoff)?;
    report.status = match &conclusion {
        Verdict::Refuted { degree, witness } => ImplicationStatus::Contradiction {
            detail: format!("hypotheses hold through degree {cutoff} but AeX fails at degree {degree}: {witness}"),
        },
        Verdict::Proven => ImplicationStatus::Verified {
            certified: hypothesis.is_proven() && standing.is_proven(),
        },
        Verdict::UnknownUpTo { .. } => ImplicationStatus::Verified { certified: false },
    };
    report.conclusion = Some(conclusion);
    Ok(report)
}

/// If `Tor_k^B(Ae, eX) = 0` for all `k >= n + 1`, then `AeΩ^{n+1}(X) ∈ P_e^∞`.
///
/// Also checks the identity `Tor_m^B(Ae, eX) ≅ Tor_m^A(AeA, X)` used by the
/// argument, for `m < N`. With everything known through `N`, the trace of
/// `Ω^{n+1}(X)` is in `P_e^{N-n-1}`; failures beyond that degree are unknown.
pub fn lemma_syzygy_trace_check<F: Field>(
    m: &Module<F>,
    ctx: &IdealContext<F>,
    n: usize,
    cutoff: usize,
) -> Result<LemmaReport> {
    let standing = standing(ctx, cutoff)?;
    let em = ctx.restrict(m)?;
    let res_b = minimal_resolution(&em, cutoff + 1);
    let tor_b = tor_dims(&ctx.ae_b, &res_b)?;
    let tor_b_at = |k: usize| tor_b.get(k).copied().unwrap_or(0);
    let bad = (n + 1..=cutoff).find(|&k| tor_b_at(k) != 0);
    let hypothesis = match bad {
        Some(k) => Verdict::Refuted {
            degree: k,
            witness: format!("dim Tor_{k}^B(Ae, eX) = {}", tor_b_at(k)),
        },
        None if res_b.terminated => Verdict::Proven,
        None => Verdict::UnknownUpTo { cutoff },
    };
    let mut report = LemmaReport {
        standing: standing.clone(),
        hypothesis: hypothesis.clone(),
        conclusion: None,
        identity: Vec::new(),
        status: ImplicationStatus::Verified { certified: false },
    };
    if let Some(s) = standing_refuted(&standing) {
        report.status = s;
        return Ok(report);
    }
    let tor_a = tor_dims(&ctx.aea_right, &minimal_resolution(m, cutoff))?;
    report.identity = (0..cutoff)
        .map(|k| (k, tor_b_at(k), tor_a.get(k).copied().unwrap_or(0)))
        .collect();
    if let Some(&(k, b, a)) = report.identity.iter().find(|(_, b, a)| b != a) {
        report.status = ImplicationStatus::Contradiction {
            detail: format!("dim Tor_{k}^B(Ae, eX) = {b} but dim Tor_{k}^A(AeA, X) = {a}"),
        };
        return Ok(report);
    }
    if let Verdict::Refuted { degree, witness } = &hypothesis {
        report.status = ImplicationStatus::HypothesisRefuted {
            degree: *degree,
            detail: witness.clone(),
        };
        return Ok(report);
    }
    let omega = syzygy_n(m, n + 1);
    let (trace, _) = ctx.trace(&omega)?;
    let profile = pe_profile(&trace, ctx, cutoff)?;
    let conclusion = pe_verdict(&profile, ctx);
    let certified_range = cutoff.checked_sub(n + 1);
    report.status = match (&conclusion, certified_range) {
        (Verdict::Refuted { degree, witness }, Some(range)) if *degree <= range => {
            ImplicationStatus::Contradiction {
                detail: format!(
                    "hypotheses hold through degree {cutoff} but AeΩ^{}(X) fails at degree {degree}: {witness}",
                    n + 1
                ),
            }
        }
        (Verdict::Refuted { degree, .. }, _) => ImplicationStatus::UnknownInputs {
            detail: format!(
                "AeΩ^{}(X) fails at degree {degree}, beyond what the hypotheses through degree {cutoff} decide",
                n + 1
            ),
        },
        (Verdict::Proven, _) => ImplicationStatus::Verified {
            certified: hypothesis.is_proven() && standing.is_proven(),
        },
        (Verdict::UnknownUpTo { .. }, _) => ImplicationStatus::Verified { certified: false },
    };
    report.conclusion = Some(conclusion);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesReport {
    pub x_membership: Verdict,
    pub standing: Verdict,
    pub pd_y: DimVerdict,
    /// `pd` of `Z` over `Ā`.
    pub pd_abar_z: Option<DimVerdict>,
    /// `pd_Ā(Z) <= pd_A(Y) + 1`.
    pub conclusion1: ImplicationStatus,
    /// `fdim(Ā) + fdim(B) + 1`, when both certificates exist.
    pub rhs2: Option<usize>,
    /// `pd_A(Y) <= fdim(Ā) + fdim(B) + 1`.
    pub conclusion2: ImplicationStatus,
}

/// The sequence `0 -> AeΩ^{n+1}(m) -> Ω^{n+1}(m) -> quotient -> 0`.
pub fn canonical_ses<F: Field>(
    m: &Module<F>,
    ctx: &IdealContext<F>,
    n: usize,
) -> Result<(ModuleMap<F>, ModuleMap<F>)> {
    let y = syzygy_n(m, n + 1);
    let (_, incl) = ctx.trace(&y)?;
    let (_, proj) = quotient_module(&y, &incl)?;
    Ok((incl, proj))
}

/// For `0 -> X -> Y -> Z -> 0` with `Z` killed by `e`, `X ∈ P_e^∞` and
/// `pd_A(Y) < ∞`: `pd_Ā(Z)` is finite and `pd_A(Y) <= fdim(Ā) + fdim(B) + 1`.
pub fn ses_bound_check<F: Field>(
    incl: &ModuleMap<F>,
    proj: &ModuleMap<F>,
    ctx: &IdealContext<F>,
    fdim_b: Option<&FdimCertificate>,
    fdim_abar: Option<&FdimCertificate>,
    cutoff: usize,
) -> Result<SesReport> {
    let (x, y, z) = (&incl.source, &incl.target, &proj.target);
    y.check_same_algebra(&proj.source)?;
    if y.dim() != proj.source.dim()
        || !incl.is_injective()
        || !proj.is_surjective()
        || !proj.matrix.mul(&incl.matrix).is_zero()
        || incl.rank() + proj.rank() != y.dim()
    {
        return Err(Error::Precondition("sequence is not exact".into()));
    }
    if !annihilated_by(z, &ctx.subset) {
        return Err(Error::Precondition("Z is not annihilated by e".into()));
    }
    let pd_y = proj_dim(y, cutoff);
    // the argument needs X and AeA to pass P_e at least through pd_A(Y)
    let reach = pd_y.exact().map_or(cutoff, |d| cutoff.max(d + 1));
    let x_membership = pe_infty_check(x, ctx, reach)?;
    let standing = standing(ctx, reach)?;
    let mut report = SesReport {
        x_membership: x_membership.clone(),
        standing: standing.clone(),
        pd_y,
        pd_abar_z: None,
        conclusion1: ImplicationStatus::Verified { certified: false },
        rhs2: None,
        conclusion2: ImplicationStatus::Verified { certified: false },
    };
    let refuted = standing_refuted(&standing).or_else(|| match &x_membership {
        Verdict::Refuted { degree, witness } => Some(ImplicationStatus::HypothesisRefuted {
            degree: *degree,
            detail: format!("X is not in P_e^∞: {witness}"),
        }),
        _ => None,
    });
    if let Some(s) = refuted {
        report.conclusion1 = s.clone();
        report.conclusion2 = s;
        return Ok(report);
    }
    let Some(d) = pd_y.exact() else {
        let s = ImplicationStatus::UnknownInputs {
            detail: format!("pd_A(Y) = {pd_y}"),
        };
        report.conclusion1 = s.clone();
        report.conclusion2 = s;
        return Ok(report);
    };
    let certified = x_membership.is_proven() && standing.is_proven();
    let pd_z = proj_dim(&ctx.to_quotient(z)?, cutoff.max(d + 2));
    report.pd_abar_z = Some(pd_z);
    report.conclusion1 = match pd_z.exact() {
        Some(p) if p <= d + 1 => ImplicationStatus::Verified { certified },
        _ => ImplicationStatus::Contradiction {
            detail: format!("pd_A(Y) = {d} but pd_Ā(Z) = {pd_z}"),
        },
    };
    report.conclusion2 = match (fdim_b, fdim_abar) {
        (Some(b), Some(q)) => {
            let rhs = q.value + b.value + 1;
            report.rhs2 = Some(rhs);
            let inputs_certified = certified && b.certified && q.certified;
            if d <= rhs {
                ImplicationStatus::Verified {
                    certified: inputs_certified,
                }
            } else if inputs_certified {
                ImplicationStatus::Contradiction {
                    detail: format!("pd_A(Y) = {d} > fdim(Ā) + fdim(B) + 1 = {rhs}"),
                }
            } else {
                ImplicationStatus::UnknownInputs {
                    detail: format!("pd_A(Y) = {d} exceeds {rhs}, which rests on uncertified inputs"),
                }
            }
        }
        _ => ImplicationStatus::UnknownInputs {
            detail: "no fdim certificate for B or Ā".into(),
        },
    };
    Ok(report)
}
