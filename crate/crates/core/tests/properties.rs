//! Property tests on random small monomial algebras and random matrices.
//!
//! Algebras: up to 4 vertices and 5 arrows, a few random length-2 relations,
//! and every remaining path of length 2, 3 or 4 killed, so the ideal is always
//! admissible and the algebra stays small.

use std::sync::Arc;

use fdim_core::algebra::{Algebra, AlgebraRef, Arrow, MonomialPresentation, Quiver};
use fdim_core::homology::{ext_dims, minimal_resolution, proj_dim, tor_dims};
use fdim_core::ideals::{build_context, pe_profile};
use fdim_core::modules::{
    direct_sum, dual, hom_dim, projective, projective_cover, quotient_by_span, quotient_module, radical_columns,
    regular, simple, submodule, syzygy, syzygy_n, tensor_dim, top, trace_submodule, Module,
};
use fdim_core::{Field, FieldSpec, Matrix, F3, Q};
use proptest::prelude::*;

type F = F3;

/// Resolution depth for the homological properties; Tor and Ext are compared
/// in degrees below it.
const DEPTH: usize = 4;

const MAX_SYZYGY_DIM: usize = 48;

fn composable_words(arrows: &[(usize, usize)], len: usize) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = (0..arrows.len()).map(|a| vec![a]).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for w in &words {
            let end = arrows[*w.last().unwrap()].1;
            for (b, &(s, _)) in arrows.iter().enumerate() {
                if s == end {
                    let mut x = w.clone();
                    x.push(b);
                    next.push(x);
                }
            }
        }
        words = next;
    }
    words
}

fn build_presentation(nv: usize, raw: &[(usize, usize)], picks: &[(usize, usize)], len: usize) -> MonomialPresentation {
    let arrows: Vec<(usize, usize)> = raw.iter().map(|&(s, t)| (s % nv, t % nv)).collect();
    let mut rels: Vec<Vec<usize>> = Vec::new();
    if !arrows.is_empty() {
        for &(x, y) in picks {
            let (x, y) = (x % arrows.len(), y % arrows.len());
            if arrows[x].1 == arrows[y].0 && !rels.contains(&vec![x, y]) {
                rels.push(vec![x, y]);
            }
        }
        for w in composable_words(&arrows, len) {
            if !rels.iter().any(|r| w.windows(r.len()).any(|s| s == r.as_slice())) {
                rels.push(w);
            }
        }
    }
    let quiver = Quiver::new(
        (1..=nv).map(|v| v.to_string()).collect(),
        arrows
            .iter()
            .enumerate()
            .map(|(i, &(source, target))| Arrow {
                label: ((b'a' + i as u8) as char).to_string(),
                source,
                target,
            })
            .collect(),
    )
    .unwrap();
    MonomialPresentation::new(quiver, rels, FieldSpec::PrimeField(3)).unwrap()
}

fn arb_presentation() -> impl Strategy<Value = MonomialPresentation> {
    (
        1usize..=4,
        prop::collection::vec((0usize..4, 0usize..4), 0..=5),
        prop::collection::vec((0usize..5, 0usize..5), 0..=4),
        2usize..=4,
    )
        .prop_map(|(nv, arrows, picks, len)| build_presentation(nv, &arrows, &picks, len))
        .prop_filter("syzygies grow too fast", tame)
}

/// Bounded syzygy growth of the simples on both sides. Every test module has
/// composition length at most `dim A`, so this keeps all resolutions small.
fn tame(p: &MonomialPresentation) -> bool {
    let a = algebra(p);
    let op = a.opposite_ref();
    (0..a.num_vertices()).all(|v| {
        [simple(&a, v), simple(&op, v)].into_iter().all(|mut m| {
            (0..=DEPTH + 2).all(|_| {
                m = syzygy(&m);
                m.dim() <= MAX_SYZYGY_DIM
            })
        })
    })
}

fn algebra(p: &MonomialPresentation) -> AlgebraRef<F> {
    Arc::new(Algebra::from_monomial(p).unwrap())
}

/// `P_v / A x` for a pseudo-random `x ∈ P_v`.
fn cyclic_quotient(a: &AlgebraRef<F>, v: usize, salt: u64) -> Module<F> {
    let p = projective(a, v);
    let mut state = salt.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let x: Vec<F> = (0..p.dim())
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            F::from_i64((state >> 33) as i64 % 3)
        })
        .collect();
    let cols: Vec<Vec<F>> = (0..a.dim()).map(|b| p.action(b).mul_vec(&x)).collect();
    quotient_by_span(&p, &Matrix::from_columns(p.dim(), &cols).unwrap()).unwrap().0
}

/// Simples, projectives, radicals, injectives, first syzygies of simples and
/// a cyclic quotient at each vertex.
fn left_modules(a: &AlgebraRef<F>, salt: u64) -> Vec<Module<F>> {
    let op = a.opposite_ref();
    let mut out = Vec::new();
    for v in 0..a.num_vertices() {
        let p = projective(a, v);
        out.push(simple(a, v));
        out.push(submodule(&p, &radical_columns(&p)).unwrap().0);
        out.push(p);
        out.push(dual(&projective(&op, v)));
        out.push(syzygy(&simple(a, v)));
        out.push(cyclic_quotient(a, v, salt + v as u64));
    }
    out
}

fn right_modules(a: &AlgebraRef<F>, salt: u64) -> Vec<Module<F>> {
    left_modules(&a.opposite_ref(), salt)
}

/// `dim e_v M` from the rank of the idempotent's action.
fn corner_dim(m: &Module<F>, v: usize) -> usize {
    m.action(m.algebra().idempotent(v)).rank()
}

fn padded(dims: &[usize], n: usize) -> Vec<usize> {
    (0..n).map(|k| dims.get(k).copied().unwrap_or(0)).collect()
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(48) })]

    #[test]
    fn rref_is_idempotent((r, c, e) in small_matrix()) {
        let m = Matrix::<Q>::from_i64(r, c, &e);
        let once = m.rref().reduced;
        prop_assert_eq!(once.rref().reduced, once);
        let m5 = Matrix::<fdim_core::Fp<5>>::from_i64(r, c, &e);
        let once = m5.rref().reduced;
        prop_assert_eq!(once.rref().reduced, once);
    }

    #[test]
    fn rank_nullity((r, c, e) in small_matrix()) {
        let m = Matrix::<Q>::from_i64(r, c, &e);
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.cols(), c);
        prop_assert!(k.cols() == 0 || m.mul(&k).is_zero());
        let m3 = Matrix::<F3>::from_i64(r, c, &e);
        prop_assert_eq!(m3.rank() + m3.kernel_basis().cols(), c);
    }

    #[test]
    fn solve_recovers_a_preimage((r, c, e) in small_matrix(), x in prop::collection::vec(-4i64..=4, 5)) {
        let m = Matrix::<Q>::from_i64(r, c, &e);
        let x: Vec<Q> = x[..c].iter().map(|&v| Q::from_i64(v)).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap().expect("b lies in the column space");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn algebra_structure(p in arb_presentation()) {
        let a = algebra(&p);
        let n = a.dim();
        // associativity on basis triples
        for i in 0..n {
            for j in 0..n {
                let ij = a.multiply(&a.basis_element(i), &a.basis_element(j)).unwrap();
                for k in 0..n {
                    let jk = a.multiply(&a.basis_element(j), &a.basis_element(k)).unwrap();
                    let left = a.multiply(&ij, &a.basis_element(k)).unwrap();
                    let right = a.multiply(&a.basis_element(i), &jk).unwrap();
                    prop_assert_eq!(left, right);
                }
            }
        }
        // orthogonal idempotents summing to the unit
        let mut sum = vec![F::from_i64(0); n];
        for v in 0..a.num_vertices() {
            let ev = a.basis_element(a.idempotent(v));
            for w in 0..a.num_vertices() {
                let prod = a.multiply(&ev, &a.basis_element(a.idempotent(w))).unwrap();
                let expect = if v == w { ev.clone() } else { vec![F::from_i64(0); n] };
                prop_assert_eq!(prod, expect);
            }
            for (s, x) in sum.iter_mut().zip(&ev) {
                *s = s.clone() + x.clone();
            }
        }
        prop_assert_eq!(sum, a.unit());
        let blocks: usize = (0..a.num_vertices())
            .flat_map(|t| (0..a.num_vertices()).map(move |s| (t, s)))
            .map(|(t, s)| a.block(t, s).len())
            .sum();
        prop_assert_eq!(blocks, n);
        prop_assert!(a.nilpotency_index().is_some());
        for v in 0..a.num_vertices() {
            prop_assert!(build_context(&a, &[v]).unwrap().b.is_local());
        }
    }

    #[test]
    fn hom_from_projective_is_corner(p in arb_presentation(), salt in any::<u64>()) {
        let a = algebra(&p);
        for m in left_modules(&a, salt) {
            for v in 0..a.num_vertices() {
                prop_assert_eq!(hom_dim(&projective(&a, v), &m).unwrap(), corner_dim(&m, v));
            }
        }
    }

    #[test]
    fn tensor_with_regular(p in arb_presentation(), salt in any::<u64>()) {
        let a = algebra(&p);
        let (ra, ra_op) = (regular(&a), regular(&a.opposite_ref()));
        for m in left_modules(&a, salt) {
            prop_assert_eq!(tensor_dim(&ra_op, &m).unwrap(), m.dim());
        }
        for x in right_modules(&a, salt) {
            prop_assert_eq!(tensor_dim(&x, &ra).unwrap(), x.dim());
        }
    }

    #[test]
    fn top_is_additive(p in arb_presentation(), salt in any::<u64>()) {
        let a = algebra(&p);
        let ms = left_modules(&a, salt);
        for (m, n) in ms.iter().zip(ms.iter().rev()) {
            let sum: Vec<usize> = top(m).iter().zip(top(n)).map(|(x, y)| x + y).collect();
            prop_assert_eq!(top(&direct_sum(m, n).unwrap()), sum);
        }
    }

    #[test]
    fn quotient_by_trace_is_killed_by_e(p in arb_presentation(), salt in any::<u64>(), mask in 1u32..16) {
        let a = algebra(&p);
        let subset: Vec<usize> = (0..a.num_vertices()).filter(|v| mask & (1 << v) != 0).collect();
        prop_assume!(!subset.is_empty());
        for m in left_modules(&a, salt) {
            let (_, incl) = trace_submodule(&m, &subset).unwrap();
            let (q, _) = quotient_module(&m, &incl).unwrap();
            for &v in &subset {
                prop_assert!(q.action(a.idempotent(v)).is_zero());
            }
        }
    }

    #[test]
    fn syzygy_dimension_bookkeeping(p in arb_presentation(), salt in any::<u64>()) {
        let a = algebra(&p);
        for m in left_modules(&a, salt) {
            let cover = projective_cover(&m);
            prop_assert_eq!(syzygy(&m).dim() + m.dim(), cover.projective.dim());
            prop_assert!(minimal_resolution(&m, DEPTH).verify().is_ok());
        }
    }

    #[test]
    fn pd_of_syzygies_shifts(p in arb_presentation(), salt in any::<u64>()) {
        let a = algebra(&p);
        for m in left_modules(&a, salt) {
            let v = proj_dim(&m, 6);
            if v.is_finite() {
                for n in 0..3 {
                    prop_assert_eq!(proj_dim(&syzygy_n(&m, n), 6), v.shift(n));
                }
            }
        }
    }

    #[test]
    fn tor_is_balanced(p in arb_presentation(), salt in any::<u64>()) {
        let a = algebra(&p);
        let lefts: Vec<_> = left_modules(&a, salt).into_iter().map(|y| {
            let r = minimal_resolution(&y, DEPTH);
            (y, r)
        }).collect();
        for x in right_modules(&a, salt) {
            let xres = minimal_resolution(&x, DEPTH);
            for (y, yres) in &lefts {
                let by_left = tor_dims(&x, yres).unwrap();
                let by_right = tor_dims(y, &xres).unwrap();
                prop_assert_eq!(padded(&by_left, DEPTH), padded(&by_right, DEPTH));
            }
        }
    }

    #[test]
    fn ext_into_dual_is_dual_tor(p in arb_presentation(), salt in any::<u64>()) {
        // Ext^n(X, DY) ≅ D Tor_n(Y, X)
        let a = algebra(&p);
        let rights = right_modules(&a, salt);
        for x in left_modules(&a, salt) {
            let res = minimal_resolution(&x, DEPTH);
            for y in &rights {
                let ext = ext_dims(&res, &dual(y)).unwrap();
                let tor = tor_dims(y, &res).unwrap();
                prop_assert_eq!(ext, tor);
            }
        }
    }

    #[test]
    fn ideal_contexts(p in arb_presentation(), salt in any::<u64>(), mask in 1u32..16) {
        let a = algebra(&p);
        let subset: Vec<usize> = (0..a.num_vertices()).filter(|v| mask & (1 << v) != 0).collect();
        prop_assume!(!subset.is_empty());
        let ctx = build_context(&a, &subset).unwrap();
        prop_assert_eq!(ctx.abar.dim() + ctx.ideal_basis.cols(), a.dim());
        prop_assert_eq!(ctx.aea_left.dim(), ctx.aea_right.dim());
        prop_assert_eq!(ctx.b.num_vertices(), subset.len());
        prop_assert!(tensor_dim(&ctx.ae_b, &ctx.ea_b).unwrap() >= ctx.ideal_basis.cols());
        // both characterizations of P_e^k agree (pe_profile fails otherwise)
        for m in left_modules(&a, salt).iter().chain([&ctx.aea_left]) {
            prop_assert!(pe_profile(m, &ctx, DEPTH).is_ok());
        }
    }
}
