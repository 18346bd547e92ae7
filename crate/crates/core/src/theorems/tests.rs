use proptest::prelude::*;

use super::*;
use crate::fixtures;
use crate::homology::{inj_dim, proj_dim, DimKind, DimVerdict, PeriodCert, Verdict};
use crate::ideals::build_context;
use crate::modules::{dual, projective, simple};
use crate::{F2, Q};

fn r32_ctx(v: usize) -> crate::ideals::IdealContext<Q> {
    build_context(&fixtures::r32::<Q>(), &[v]).unwrap()
}

#[test]
fn transfer_on_projectives_and_ideals() {
    let c2 = r32_ctx(1);
    let r = pd_transfer_check(&projective(&c2.a, 1), &c2, 12).unwrap();
    assert_eq!((r.pd_a, r.pd_b), (DimVerdict::exactly(0), DimVerdict::exactly(0)));
    assert_eq!(r.status, ImplicationStatus::Verified { certified: true });

    let r = pd_transfer_check(&c2.aea_left, &c2, 12).unwrap();
    assert_eq!(r.membership, Verdict::Proven);
    assert_eq!((r.pd_a, r.pd_b), (DimVerdict::exactly(0), DimVerdict::exactly(0)));

    let c1 = r32_ctx(0);
    let r = pd_transfer_check(&c1.aea_left, &c1, 12).unwrap();
    assert_eq!(r.membership, Verdict::UnknownUpTo { cutoff: 12 });
    assert_eq!(r.pd_a.kind, DimKind::AtLeast(13));
    assert_eq!(r.pd_b.kind, DimKind::AtLeast(13));
    assert!(r.pd_a.certificate.is_some() && r.pd_b.certificate.is_some());
    assert_eq!(r.status, ImplicationStatus::Verified { certified: false });

    // S1 with E = {2} has P_0 = P1 outside add(Ae2)
    let r = pd_transfer_check(&simple(&c2.a, 0), &c2, 12).unwrap();
    assert!(r.status.is_hypothesis_refuted());
}

#[test]
fn aex_lemma() {
    let c1 = r32_ctx(0);
    let p = lemma_aex_check(&projective(&c1.a, 1), &c1, 12).unwrap();
    assert!(p.hypothesis.is_unknown() || p.hypothesis.is_proven());
    assert!(p.status.is_verified());

    // rad P1 = P2 is projective, so its Tor against Ā vanishes
    let rad = base_battery(&c1.a).into_iter().find(|(n, _)| n == "radP1").unwrap().1;
    let r = lemma_aex_check(&rad, &c1, 12).unwrap();
    assert!(r.status.is_verified());
    assert!(r.conclusion.is_some());

    // S1 over E = {1}: Tor_1(Ā, S1) = rad(Ā) ⊗ ... is nonzero
    let r = lemma_aex_check(&simple(&c1.a, 0), &c1, 12).unwrap();
    assert!(matches!(r.status, ImplicationStatus::HypothesisRefuted { degree: 1, .. }));
    assert_eq!(r.conclusion, None);
}

#[test]
fn syzygy_trace_lemma() {
    let c1 = r32_ctx(0);
    // Ae1 is free as a right B-module, so Tor^B_k(Ae1, -) vanishes for k > 0
    let r = lemma_syzygy_trace_check(&simple(&c1.a, 0), &c1, 0, 12).unwrap();
    assert!(r.hypothesis.is_unknown());
    assert!(r.identity.iter().all(|(_, b, a)| b == a));
    assert_eq!(r.identity[0], (0, 2, 2));
    assert_eq!(r.status, ImplicationStatus::Verified { certified: false });

    let r = lemma_syzygy_trace_check(&projective(&c1.a, 0), &c1, 0, 12).unwrap();
    assert_eq!(r.conclusion, Some(Verdict::Proven));
    assert!(r.status.is_verified());

    // finite pd witness, n = pd_B(eX)
    let c2 = r32_ctx(1);
    let s1 = simple(&c2.a, 0);
    let n = proj_dim(&c2.restrict(&s1).unwrap(), 12).exact().unwrap();
    let r = lemma_syzygy_trace_check(&s1, &c2, n, 12).unwrap();
    assert!(r.status.is_verified(), "{:?}", r.status);
}

#[test]
fn ses_checks() {
    let c2 = r32_ctx(1);
    let inputs = BoundInputs::automatic(&c2, 12);
    let s1 = simple(&c2.a, 0);
    let (incl, proj) = canonical_ses(&s1, &c2, 0).unwrap();
    let r = ses_bound_check(&incl, &proj, &c2, inputs.fdim_b.as_ref(), inputs.fdim_abar.as_ref(), 12).unwrap();
    assert!(!r.conclusion1.is_hard_error() && !r.conclusion2.is_hard_error());
    assert_eq!(r.pd_y, DimVerdict::exactly(0));

    // x = y, z = 0
    let p = projective(&c2.a, 1);
    let id = crate::modules::ModuleMap::new(p.clone(), p.clone(), crate::Matrix::identity(p.dim())).unwrap();
    let zero = crate::modules::Module::zero(c2.a.clone());
    let to_zero = crate::modules::ModuleMap::new(p.clone(), zero, crate::Matrix::zeros(0, p.dim())).unwrap();
    let r = ses_bound_check(&id, &to_zero, &c2, inputs.fdim_b.as_ref(), inputs.fdim_abar.as_ref(), 12).unwrap();
    assert_eq!(r.pd_abar_z, Some(DimVerdict::exactly(0)));
    assert_eq!(r.conclusion1, ImplicationStatus::Verified { certified: true });
    assert_eq!(r.conclusion2, ImplicationStatus::Verified { certified: true });

    // not exact
    assert!(ses_bound_check(&to_zero_incl(&c2), &to_zero, &c2, None, None, 12).is_err());
}

fn to_zero_incl(ctx: &crate::ideals::IdealContext<Q>) -> crate::modules::ModuleMap<Q> {
    let zero = crate::modules::Module::zero(ctx.a.clone());
    let p = projective(&ctx.a, 1);
    crate::modules::ModuleMap::new(zero, p.clone(), crate::Matrix::zeros(p.dim(), 0)).unwrap()
}

#[test]
fn fdim_certificates() {
    let c1 = r32_ctx(0);
    let b = fdim_certificate(&c1.b, FdimRequest::LocalZero, 12).unwrap();
    assert_eq!((b.value, b.certified), (0, true));
    assert!(fdim_certificate(&c1.a, FdimRequest::LocalZero, 12).is_err());
    assert!(fdim_certificate(&c1.a, FdimRequest::GlobalDimBound, 12).is_err());

    let c2 = r32_ctx(1);
    assert_eq!(fdim_certificate(&c2.abar, FdimRequest::LocalZero, 12).unwrap().value, 0);
    assert_eq!(fdim_certificate(&c2.abar, FdimRequest::GlobalDimBound, 12).unwrap().value, 0);

    let a2 = fixtures::a2::<Q>();
    let g = fdim_certificate(&a2, FdimRequest::GlobalDimBound, 12).unwrap();
    assert_eq!(g.value, 1);
    assert_eq!(g.method, FdimMethod::GlobalDimBound { gd: 1 });
    assert_eq!(g.witnesses, vec![("S1".to_string(), 1)]);

    let u = fdim_certificate(&a2, FdimRequest::UserAsserted { value: 7 }, 12).unwrap();
    assert!(!u.certified);
    assert!(fdim_certificate(&a2, FdimRequest::ExhaustiveSearch { max_dim: 2 }, 12).is_err());
}

#[test]
fn exhaustive_search_over_f2() {
    let a2 = fixtures::a2::<F2>();
    let c = fdim_certificate(&a2, FdimRequest::ExhaustiveSearch { max_dim: 3 }, 12).unwrap();
    // lower bound only, attained by S1
    assert_eq!(c.value, 1);
    assert!(!c.certified);
    // dimension vectors of total <= 3 and the arrow matrices on each:
    // sum over (d1, d2) of 2^(d1 d2)
    let oracle: usize = (0..=3usize)
        .flat_map(|d1| (0..=3 - d1).map(move |d2| (d1, d2)))
        .filter(|&(d1, d2)| d1 + d2 > 0)
        .map(|(d1, d2)| 1usize << (d1 * d2))
        .sum();
    assert_eq!(c.method, FdimMethod::ExhaustiveSearch { max_dim: 3, modules: oracle });

    let r = fixtures::r32::<F2>();
    let c = fdim_certificate(&r, FdimRequest::ExhaustiveSearch { max_dim: 2 }, 12).unwrap();
    assert_eq!(c.value, 1);
}

#[test]
fn bounds_on_r32_with_e2() {
    let c2 = r32_ctx(1);
    let inputs = BoundInputs::automatic(&c2, 12);
    let w = standard_battery(&c2);
    let reports = bound_reports(&c2, &Bound::ALL, &w, &inputs, 12).unwrap();
    let b1 = &reports[0];
    assert_eq!(b1.rhs, Some(2));
    let s1 = b1.witnesses.iter().find(|l| l.module == "S1").unwrap();
    assert_eq!((s1.holds, s1.status), (Some(true), WitnessStatus::Holds));
    for r in &reports {
        assert_eq!(r.violations(), 0, "bound {}", r.bound_id.id());
        assert_eq!(r.count(WitnessStatus::ExceedsUncertified), 0);
        assert!(r.monotone);
    }
    // pd_{A^op}(Ae2A) is infinite, so bound 3 has no right side
    assert_eq!(reports[2].rhs, None);
    assert_eq!(reports[5].rhs, Some(2));
    assert!(reports[5].applicable);
}

#[test]
fn bounds_on_a2() {
    let a = fixtures::a2::<Q>();
    let ctx = build_context(&a, &[1]).unwrap();
    let inputs = BoundInputs::automatic(&ctx, 12);
    let w: Vec<Named<Q>> = vec![("S1".into(), simple(&a, 0)), ("S2".into(), simple(&a, 1))];
    let b6 = bound_report(&ctx, Bound::Primitive, &w, &inputs, 12).unwrap();
    assert_eq!(b6.rhs, Some(2));
    assert!(b6.witnesses.iter().all(|l| l.status == WitnessStatus::Holds));

    let b4 = bound_report(&ctx, Bound::Injective, &w, &inputs, 12).unwrap();
    let pd_aea = proj_dim(&ctx.aea_left, 12).exact().unwrap();
    assert_eq!(b4.rhs, Some(pd_aea + 2));
    for (line, (_, m)) in b4.witnesses.iter().zip(&w) {
        assert_eq!(line.lhs, inj_dim(m, 12));
        assert_eq!(line.status, WitnessStatus::Holds);
    }
}

#[test]
fn injective_bound_is_right_bound_on_opposite() {
    let c2 = r32_ctx(1);
    let inputs = BoundInputs::automatic(&c2, 12);
    let w = base_battery(&c2.a);
    let b4 = bound_report(&c2, Bound::Injective, &w, &inputs, 12).unwrap();
    let op = c2.opposite().unwrap();
    let duals: Vec<Named<Q>> = w.iter().map(|(n, m)| (format!("D({n})"), dual(m))).collect();
    let op_inputs = BoundInputs {
        fdim_b: inputs.fidim_b.clone(),
        fdim_abar: inputs.fidim_abar.clone(),
        ..Default::default()
    };
    let b3 = bound_report(&op, Bound::RightIdeal, &duals, &op_inputs, 12).unwrap();
    assert_eq!(b4.rhs, b3.rhs);
    let lhs4: Vec<_> = b4.witnesses.iter().map(|l| (l.module.clone(), l.lhs, l.holds)).collect();
    let lhs3: Vec<_> = b3.witnesses.iter().map(|l| (l.module.clone(), l.lhs, l.holds)).collect();
    assert_eq!(lhs4, lhs3);
}

#[test]
fn general_hypothesis() {
    let c2 = r32_ctx(1);
    let inputs = BoundInputs::automatic(&c2, 12);
    let w: Vec<Named<Q>> = vec![("S1".into(), simple(&c2.a, 0))];
    let r = general_hypothesis_check(&c2, &w, 0, &inputs, 12).unwrap();
    assert_eq!(r.rhs, Some(2));
    assert_eq!(r.witnesses[0].holds, Some(true));
    assert!(r.witnesses[0].hypothesis.is_proven());
    // Ae2 has infinite projective dimension over B^op, so the vanishing is
    // only known for this witness
    assert_eq!(r.pd_ae.kind, DimKind::AtLeast(13));
    assert!(!r.global_hypothesis);
    assert_eq!(r.witnesses[0].status, WitnessStatus::HoldsConditionally);

    // Ae1 is free over B^op: the hypothesis holds for every module with n = 0
    let c1 = r32_ctx(0);
    let inputs = BoundInputs::automatic(&c1, 12);
    let r = general_hypothesis_check(&c1, &w_for(&c1), 0, &inputs, 12).unwrap();
    assert_eq!(r.pd_ae, DimVerdict::exactly(0));
    assert!(r.global_hypothesis);
}

fn w_for(ctx: &crate::ideals::IdealContext<Q>) -> Vec<Named<Q>> {
    base_battery(&ctx.a)
}

#[test]
fn stratified_chains() {
    let a2 = fixtures::a2::<Q>();
    let r = stratified_chain_search(&a2, 12).unwrap();
    assert!(r.chain.is_some());
    assert!(r.steps.iter().all(|s| s.projective && s.pd == DimVerdict::exactly(0)));

    let k = fixtures::field_algebra::<Q>();
    let r = stratified_chain_search(&k, 12).unwrap();
    assert_eq!(r.chain, Some(vec!["1".to_string()]));

    let r = stratified_chain_search(&fixtures::r32::<Q>(), 12).unwrap();
    assert_eq!(r.chain, Some(vec!["2".to_string(), "1".to_string()]));
    assert_eq!(r.steps[0].layer_dim, 6);

    // the dual numbers are local, so the single layer is the whole algebra
    let r = stratified_chain_search(&fixtures::dual_numbers::<Q>(), 12).unwrap();
    assert_eq!(r.steps.len(), 1);
}

#[test]
fn battery_names_and_shapes() {
    let c1 = r32_ctx(0);
    let names: Vec<String> = standard_battery(&c1).into_iter().map(|(n, _)| n).collect();
    assert_eq!(&names[..2], &["S1".to_string(), "Omega1(S1)".to_string()]);
    assert!(names.contains(&"radP2".to_string()));
    assert!(names.iter().any(|n| n.starts_with("trace(")));
    let w = base_battery(&c1.a);
    let s2 = w.iter().find(|(n, _)| n == "S2").unwrap();
    assert_eq!(proj_dim(&s2.1, 12).certificate, Some(PeriodCert { lag: 1, period: 1 }));
}

fn all_bounds() -> impl Strategy<Value = Bound> {
    prop::sample::select(Bound::ALL.to_vec())
}

proptest! {
    #[test]
    fn rhs_is_monotone(b in all_bounds(), t in prop::collection::vec(0usize..20, 3), i in 0usize..3, delta in 0usize..10) {
        let n = b.term_names().len();
        let t = &t[..n];
        let mut u = t.to_vec();
        u[i % n] += delta;
        prop_assert!(b.rhs(&u) >= b.rhs(t));
    }

    #[test]
    fn primitive_bound_within_max_form(fq in 0usize..50) {
        // |E| = 1 with AeA projective: fdim(B) = 0 and pd_A(AeA) = 0
        prop_assert!(Bound::Primitive.rhs(&[fq]) <= Bound::MaxForm.rhs(&[0, 0, fq]));
    }
}
