//! The data attached to an idempotent `e = Σ_{v ∈ E} e_v`: the ideal `AeA`,
//! the corner `B = eAe`, the quotient `Ā = A/AeA`, the bimodules `Ae` and
//! `eA`, and the membership tests for `P_e^k` and strong idempotency.

use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::algebra::{Algebra, AlgebraElement, AlgebraRef, Sparse, StructureConstants};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::homology::{ext_dims, minimal_resolution, tor_dims, Resolution, Verdict};
use crate::modules::{
    annihilated_by, change_rings, in_add, projective_sum, quotient_by_span, regular,
    restrict_to_corner, submodule, tensor_dim, trace_submodule, Module, ModuleMap,
};

pub struct IdealContext<F> {
    pub a: AlgebraRef<F>,
    pub a_op: AlgebraRef<F>,
    /// Sorted vertex indices of `E`.
    pub subset: Vec<usize>,
    pub e: AlgebraElement<F>,
    /// Columns spanning `AeA` in algebra coordinates.
    pub ideal_basis: Matrix<F>,
    pub aea_left: Module<F>,
    /// `AeA` as a right module (over `A^op`).
    pub aea_right: Module<F>,
    pub b: AlgebraRef<F>,
    pub b_op: AlgebraRef<F>,
    /// Algebra basis index of each basis element of `B`.
    pub b_embedding: Vec<usize>,
    pub abar: AlgebraRef<F>,
    /// Algebra basis index lifting each basis element of `Ā`.
    pub abar_lift: Vec<usize>,
    /// `A` vertex of each `Ā` vertex.
    pub abar_vertices: Vec<usize>,
    /// Image in `Ā` of each algebra basis element.
    pub projection: Vec<Sparse<F>>,
    /// `Ā` as a left and as a right `A`-module.
    pub abar_left: Module<F>,
    pub abar_right: Module<F>,
    /// `Ae` as a left `A`-module and as a right `B`-module.
    pub ae: Module<F>,
    pub ae_b: Module<F>,
    /// `eA` as a right `A`-module and as a left `B`-module.
    pub ea: Module<F>,
    pub ea_b: Module<F>,
    abar_right_res: Mutex<Option<Arc<Resolution<F>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextSummary {
    pub subset: Vec<String>,
    pub dim_a: usize,
    pub dim_aea: usize,
    pub dim_b: usize,
    pub dim_abar: usize,
    pub b_local: bool,
}

/// Algebra basis index -> coordinate in [`regular`].
fn regular_coords<F: Field>(a: &Algebra<F>) -> Vec<usize> {
    let mut coords = vec![0; a.dim()];
    let mut k = 0;
    for v in 0..a.num_vertices() {
        for b in 0..a.dim() {
            if a.right_vertex(b) == v {
                coords[b] = k;
                k += 1;
            }
        }
    }
    coords
}

fn to_regular<F: Field>(a: &Algebra<F>, cols: &Matrix<F>) -> Matrix<F> {
    let coords = regular_coords(a);
    let mut out = Matrix::zeros(a.dim(), cols.cols());
    for b in 0..a.dim() {
        for j in 0..cols.cols() {
            out.set(coords[b], j, cols.get(b, j).clone());
        }
    }
    out
}

/// `AeA` as the span of all products `b_i e_v b_j`.
fn ideal_span<F: Field>(a: &Algebra<F>, subset: &[usize]) -> Matrix<F> {
    let mut cols = Vec::new();
    for i in 0..a.dim() {
        if !subset.contains(&a.right_vertex(i)) {
            continue;
        }
        for j in 0..a.dim() {
            if a.right_vertex(i) != a.left_vertex(j) {
                continue;
            }
            let mut c = vec![F::zero(); a.dim()];
            for (k, x) in a.basis_product(i, j) {
                c[*k] = x.clone();
            }
            if c.iter().any(|x| !x.is_zero()) {
                cols.push(c);
            }
        }
    }
    Matrix::from_columns(a.dim(), &cols).unwrap().column_space()
}

/// For monomial algebras: the nonzero paths through a vertex of `E`.
fn monomial_ideal<F: Field>(a: &Algebra<F>, subset: &[usize]) -> Option<Vec<usize>> {
    let data = a.monomial()?;
    let q = &data.presentation.quiver;
    Some(
        data.paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.vertices(q).iter().any(|v| subset.contains(v)))
            .map(|(i, _)| i)
            .collect(),
    )
}

fn corner<F: Field>(a: &Algebra<F>, subset: &[usize]) -> Result<(Algebra<F>, Vec<usize>)> {
    let emb: Vec<usize> = (0..a.dim())
        .filter(|&b| subset.contains(&a.left_vertex(b)) && subset.contains(&a.right_vertex(b)))
        .collect();
    let index = |k: usize| emb.iter().position(|&x| x == k);
    let n = emb.len();
    let mut products = vec![Vec::new(); n * n];
    for (i, &bi) in emb.iter().enumerate() {
        for (j, &bj) in emb.iter().enumerate() {
            let mut p = Vec::new();
            for (k, x) in a.basis_product(bi, bj) {
                let kk = index(*k).ok_or_else(|| {
                    Error::Inconsistent("corner algebra is not closed under multiplication".into())
                })?;
                p.push((kk, x.clone()));
            }
            products[i * n + j] = p;
        }
    }
    let b = Algebra::from_structure(StructureConstants {
        labels: emb.iter().map(|&k| a.labels()[k].clone()).collect(),
        vertex_labels: subset.iter().map(|&v| a.vertex_labels()[v].clone()).collect(),
        idempotents: subset.iter().map(|&v| index(a.idempotent(v)).unwrap()).collect(),
        products,
    })?;
    Ok((b, emb))
}

/// Generic quotient `A / I` for an ideal spanned by `ideal` (homogeneous
/// columns). Returns the quotient, the lift of each quotient basis element and
/// the projection of each algebra basis element.
fn quotient_algebra<F: Field>(
    a: &Algebra<F>,
    ideal: &Matrix<F>,
    subset: &[usize],
) -> Result<(Algebra<F>, Vec<usize>, Vec<usize>, Vec<Sparse<F>>)> {
    let n = a.dim();
    let k = ideal.cols();
    let piv = ideal.hstack(&Matrix::identity(n)).independent_columns();
    let lift: Vec<usize> = piv.iter().filter(|&&p| p >= k).map(|&p| p - k).collect();
    let t = ideal.hstack(&Matrix::identity(n).select_cols(&lift));
    let tinv = t
        .solve_matrix(&Matrix::identity(n))?
        .expect("ideal plus complement is a basis");
    let rows: Vec<usize> = (k..n).collect();
    let proj = tinv.select_rows(&rows);
    let projection: Vec<Sparse<F>> = (0..n)
        .map(|b| {
            (0..lift.len())
                .filter(|&r| !proj.get(r, b).is_zero())
                .map(|r| (r, proj.get(r, b).clone()))
                .collect()
        })
        .collect();
    let m = lift.len();
    let mut products = vec![Vec::new(); m * m];
    for i in 0..m {
        for j in 0..m {
            let mut c = vec![F::zero(); m];
            for (b, x) in a.basis_product(lift[i], lift[j]) {
                for (r, y) in &projection[*b] {
                    c[*r] = c[*r].clone() + x.clone() * y.clone();
                }
            }
            products[i * m + j] = c
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect();
        }
    }
    let vertices: Vec<usize> = (0..a.num_vertices()).filter(|v| !subset.contains(v)).collect();
    let idempotents = vertices
        .iter()
        .map(|&v| {
            lift.iter()
                .position(|&b| b == a.idempotent(v))
                .ok_or_else(|| Error::Inconsistent("quotient lost an idempotent".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let q = Algebra::from_structure(StructureConstants {
        labels: lift.iter().map(|&b| a.labels()[b].clone()).collect(),
        vertex_labels: vertices.iter().map(|&v| a.vertex_labels()[v].clone()).collect(),
        idempotents,
        products,
    })?;
    Ok((q, lift, vertices, projection))
}

/// Rebuilds `A/AeA` of a monomial algebra as the monomial algebra on the
/// complementary full subquiver, and checks it against the generic quotient
/// basis element by basis element. Also returns the generic index of each
/// monomial basis element.
fn monomial_quotient<F: Field>(
    a: &Algebra<F>,
    subset: &[usize],
    generic: &Algebra<F>,
    lift: &[usize],
) -> Result<Option<(Algebra<F>, Vec<usize>)>> {
    let Some(data) = a.monomial() else {
        return Ok(None);
    };
    let (pres, keep, old_arrows) = data.presentation.quotient_by_vertices(subset);
    let q = Algebra::<F>::from_monomial(&pres)?;
    if q.dim() != generic.dim() {
        return Err(Error::Inconsistent(format!(
            "monomial quotient has dimension {} but the generic quotient {}",
            q.dim(),
            generic.dim()
        )));
    }
    let qdata = q.monomial().expect("monomial");
    // new path -> old basis index -> generic quotient index
    let perm: Vec<usize> = qdata
        .paths
        .iter()
        .map(|p| {
            let old = crate::algebra::Path {
                start: keep[p.start],
                arrows: p.arrows.iter().map(|&x| old_arrows[x]).collect(),
            };
            let ob = data.paths.iter().position(|x| *x == old);
            ob.and_then(|ob| lift.iter().position(|&l| l == ob))
                .ok_or_else(|| Error::Inconsistent("monomial quotient path not in the quotient".into()))
        })
        .collect::<Result<_>>()?;
    for i in 0..q.dim() {
        for j in 0..q.dim() {
            let mapped: Sparse<F> = q
                .basis_product(i, j)
                .iter()
                .map(|(k, x)| (perm[*k], x.clone()))
                .collect();
            if mapped != *generic.basis_product(perm[i], perm[j]) {
                return Err(Error::Inconsistent("monomial and generic quotients differ".into()));
            }
        }
    }
    Ok(Some((q, perm)))
}

pub fn build_context<F: Field>(a: &AlgebraRef<F>, subset: &[usize]) -> Result<IdealContext<F>> {
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.is_empty() {
        return Err(Error::Precondition("the idempotent subset E is empty".into()));
    }
    if subset.iter().any(|&v| v >= a.num_vertices()) {
        return Err(Error::Precondition("vertex in E out of range".into()));
    }
    let a_op = a.opposite_ref();
    let mut e = vec![F::zero(); a.dim()];
    for &v in &subset {
        e[a.idempotent(v)] = F::one();
    }

    let ideal_basis = ideal_span(a, &subset);
    if let Some(paths) = monomial_ideal(a, &subset) {
        let outside = (0..a.dim()).filter(|b| !paths.contains(b));
        let ok = ideal_basis.cols() == paths.len()
            && outside.into_iter().all(|b| ideal_basis.row(b).iter().all(|x| x.is_zero()));
        if !ok {
            return Err(Error::Inconsistent("path description of AeA disagrees with its span".into()));
        }
    }
    let reg = regular(a);
    let (aea_left, _) = submodule(&reg, &to_regular(a, &ideal_basis))?;
    let reg_op = regular(&a_op);
    let (aea_right, _) = submodule(&reg_op, &to_regular(&a_op, &ideal_basis))?;
    let (abar_left, _) = quotient_by_span(&reg, &to_regular(a, &ideal_basis))?;
    let (abar_right, _) = quotient_by_span(&reg_op, &to_regular(&a_op, &ideal_basis))?;

    let (b, b_embedding) = corner(a, &subset)?;
    let b = Arc::new(b);
    let b_op = b.opposite_ref();

    let (generic, abar_lift, abar_vertices, projection) = quotient_algebra(a, &ideal_basis, &subset)?;
    let (abar, abar_lift, projection) = match monomial_quotient(a, &subset, &generic, &abar_lift)? {
        Some((q, perm)) => {
            let mut to_new = vec![0; perm.len()];
            for (i, &g) in perm.iter().enumerate() {
                to_new[g] = i;
            }
            let lift = perm.iter().map(|&g| abar_lift[g]).collect();
            let projection = projection
                .iter()
                .map(|s| {
                    let mut s: Sparse<F> = s.iter().map(|(k, x)| (to_new[*k], x.clone())).collect();
                    s.sort_by_key(|(k, _)| *k);
                    s
                })
                .collect();
            (Arc::new(q), lift, projection)
        }
        None => (Arc::new(generic), abar_lift, projection),
    };
    finish(FinishArgs {
        a: a.clone(),
        a_op,
        subset,
        e,
        ideal_basis,
        aea_left,
        aea_right,
        b,
        b_op,
        b_embedding,
        abar,
        abar_lift,
        abar_vertices,
        projection,
        abar_left,
        abar_right,
    })
}

struct FinishArgs<F> {
    a: AlgebraRef<F>,
    a_op: AlgebraRef<F>,
    subset: Vec<usize>,
    e: AlgebraElement<F>,
    ideal_basis: Matrix<F>,
    aea_left: Module<F>,
    aea_right: Module<F>,
    b: AlgebraRef<F>,
    b_op: AlgebraRef<F>,
    b_embedding: Vec<usize>,
    abar: AlgebraRef<F>,
    abar_lift: Vec<usize>,
    abar_vertices: Vec<usize>,
    projection: Vec<Sparse<F>>,
    abar_left: Module<F>,
    abar_right: Module<F>,
}

fn finish<F: Field>(x: FinishArgs<F>) -> Result<IdealContext<F>> {
    let a = &x.a;
    let e_index = |v: usize| x.subset.iter().position(|&w| w == v);
    let ae = projective_sum(a, &x.subset);
    let ea = projective_sum(&x.a_op, &x.subset);

    // Ae as a right B-module: basis elements starting in E, acted on by right
    // multiplication
    let ae_coords: Vec<usize> = (0..a.dim())
        .filter(|&b| x.subset.contains(&a.right_vertex(b)))
        .collect();
    let ae_b = bimodule_side(a, &x.b_op, &ae_coords, &x.b_embedding, |b| e_index(a.right_vertex(b)), true)?;
    let ea_coords: Vec<usize> = (0..a.dim())
        .filter(|&b| x.subset.contains(&a.left_vertex(b)))
        .collect();
    let ea_b = bimodule_side(a, &x.b, &ea_coords, &x.b_embedding, |b| e_index(a.left_vertex(b)), false)?;

    let ctx = IdealContext {
        a: x.a.clone(),
        a_op: x.a_op,
        subset: x.subset,
        e: x.e,
        ideal_basis: x.ideal_basis,
        aea_left: x.aea_left,
        aea_right: x.aea_right,
        b: x.b,
        b_op: x.b_op,
        b_embedding: x.b_embedding,
        abar: x.abar,
        abar_lift: x.abar_lift,
        abar_vertices: x.abar_vertices,
        projection: x.projection,
        abar_left: x.abar_left,
        abar_right: x.abar_right,
        ae,
        ae_b,
        ea,
        ea_b,
        abar_right_res: Mutex::new(None),
    };
    ctx.check_invariants()?;
    Ok(ctx)
}

/// One side of `Ae` or `eA` as a module over the corner (or its opposite):
/// `coords` are the algebra basis elements spanning it; `right` selects
/// right multiplication by `B`.
fn bimodule_side<F: Field>(
    a: &Algebra<F>,
    corner: &AlgebraRef<F>,
    coords: &[usize],
    embedding: &[usize],
    tag: impl Fn(usize) -> Option<usize>,
    right: bool,
) -> Result<Module<F>> {
    let n = coords.len();
    let pos = |b: usize| coords.iter().position(|&c| c == b);
    let actions = embedding
        .iter()
        .map(|&beta| {
            let mut m = Matrix::zeros(n, n);
            for (j, &x) in coords.iter().enumerate() {
                let prod = if right {
                    a.basis_product(x, beta)
                } else {
                    a.basis_product(beta, x)
                };
                for (k, c) in prod {
                    let i = pos(*k).expect("bimodule is closed under the corner action");
                    m.set(i, j, c.clone());
                }
            }
            m
        })
        .collect();
    let vertex = coords.iter().map(|&b| tag(b).unwrap()).collect();
    Module::from_adapted(corner.clone(), vertex, actions)
}

impl<F: Field> IdealContext<F> {
    fn check_invariants(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Inconsistent(m.to_string()));
        let d = self.ideal_basis.cols();
        if self.aea_left.dim() != d || self.aea_right.dim() != d {
            return fail("AeA has different dimensions on the two sides");
        }
        if self.abar.dim() + d != self.a.dim() {
            return fail("dim Ā + dim AeA != dim A");
        }
        let e2 = self.a.multiply(&self.e, &self.e)?;
        if e2 != self.e {
            return fail("e is not idempotent");
        }
        if self.b.num_vertices() != self.subset.len()
            || self.abar.num_vertices() + self.subset.len() != self.a.num_vertices()
        {
            return fail("wrong number of idempotents in B or Ā");
        }
        // rad B = e rad(A) e, rad Ā = image of rad A
        let rad_b = self.b_embedding.iter().filter(|&&k| self.a.is_radical(k)).count();
        if rad_b != self.b.radical_basis().len() {
            return fail("radical of B is not e rad(A) e");
        }
        for (i, &l) in self.abar_lift.iter().enumerate() {
            if self.abar.is_radical(i) != self.a.is_radical(l) {
                return fail("radical of Ā is not the image of rad A");
            }
        }
        if !annihilated_by(&self.abar_left, &self.subset) {
            return fail("e does not annihilate Ā");
        }
        Ok(())
    }

    pub fn summary(&self) -> ContextSummary {
        ContextSummary {
            subset: self.subset.iter().map(|&v| self.a.vertex_labels()[v].clone()).collect(),
            dim_a: self.a.dim(),
            dim_aea: self.ideal_basis.cols(),
            dim_b: self.b.dim(),
            dim_abar: self.abar.dim(),
            b_local: self.b.is_local(),
        }
    }

    /// The opposite context: `A^op` with the same `E`. Its `AeA_left` is this
    /// context's `AeA_right`.
    pub fn opposite(&self) -> Result<IdealContext<F>> {
        build_context(&self.a_op, &self.subset)
    }

    /// `eM` as a `B`-module.
    pub fn restrict(&self, m: &Module<F>) -> Result<Module<F>> {
        if !crate::algebra::same_algebra(m.algebra(), &self.a) {
            return Err(Error::AlgebraMismatch("module is not over the context algebra".into()));
        }
        restrict_to_corner(m, &self.b, &self.b_embedding, &self.subset)
    }

    /// `eM` for a right module `m` (over `A^op`), as a right `B`-module.
    pub fn restrict_right(&self, m: &Module<F>) -> Result<Module<F>> {
        if !crate::algebra::same_algebra(m.algebra(), &self.a_op) {
            return Err(Error::AlgebraMismatch("module is not over the opposite algebra".into()));
        }
        restrict_to_corner(m, &self.b_op, &self.b_embedding, &self.subset)
    }

    /// The trace `AeM` with its inclusion.
    pub fn trace(&self, m: &Module<F>) -> Result<(Module<F>, ModuleMap<F>)> {
        trace_submodule(m, &self.subset)
    }

    /// An `A`-module killed by `e`, viewed as an `Ā`-module.
    pub fn to_quotient(&self, m: &Module<F>) -> Result<Module<F>> {
        if !annihilated_by(m, &self.subset) {
            return Err(Error::Precondition("module is not annihilated by e".into()));
        }
        let images: Vec<Sparse<F>> = self
            .abar_lift
            .iter()
            .map(|&b| vec![(b, F::one())])
            .collect();
        let vertex_map: Vec<Option<usize>> = (0..self.a.num_vertices())
            .map(|v| self.abar_vertices.iter().position(|&w| w == v))
            .collect();
        change_rings(m, &self.abar, &images, &vertex_map)
    }

    /// An `Ā`-module viewed as an `A`-module.
    pub fn inflate(&self, m: &Module<F>) -> Result<Module<F>> {
        let vertex_map: Vec<Option<usize>> = self.abar_vertices.iter().map(|&v| Some(v)).collect();
        change_rings(m, &self.a, &self.projection, &vertex_map)
    }

    /// Minimal resolution of `Ā` as a right module, cached across calls.
    pub fn abar_right_resolution(&self, cutoff: usize) -> Arc<Resolution<F>> {
        let mut guard = self.abar_right_res.lock().expect("resolution cache");
        if let Some(r) = guard.as_ref() {
            if r.terminated || r.cutoff >= cutoff {
                return r.clone();
            }
        }
        let r = Arc::new(minimal_resolution(&self.abar_right, cutoff));
        *guard = Some(r.clone());
        r
    }

    /// `dim Tor_n^A(Ā, m)` for `0 <= n <= k`, computed by resolving `Ā` as a
    /// right module.
    pub fn tor_abar(&self, m: &Module<F>, k: usize) -> Result<Vec<usize>> {
        let res = self.abar_right_resolution(k + 1);
        let dims = tor_dims(m, &res)?;
        Ok((0..=k).map(|n| dims.get(n).copied().unwrap_or(0)).collect())
    }
}

/// Criterion (a): the multiplication map `Ae ⊗_B eA -> AeA` is an
/// isomorphism. It is always onto, so dimensions decide.
pub fn multiplication_map_check<F: Field>(ctx: &IdealContext<F>) -> Result<bool> {
    Ok(tensor_dim(&ctx.ae_b, &ctx.ea_b)? == ctx.ideal_basis.cols())
}

/// `dim Tor_n^B(Ae, eA)` for every degree determined by a resolution of `eA`
/// to the given cutoff, and whether that resolution terminated.
pub fn cps_tor<F: Field>(ctx: &IdealContext<F>, cutoff: usize) -> Result<(Vec<usize>, bool)> {
    let res = minimal_resolution(&ctx.ea_b, cutoff);
    Ok((tor_dims(&ctx.ae_b, &res)?, res.terminated))
}

/// Criterion (b): `Ae ⊗_B eA ≅ AeA` and `Tor_n^B(Ae, eA) = 0` for `n > 0`.
pub fn cps_check<F: Field>(ctx: &IdealContext<F>, cutoff: usize) -> Result<Verdict> {
    let tensor = tensor_dim(&ctx.ae_b, &ctx.ea_b)?;
    if tensor != ctx.ideal_basis.cols() {
        return Ok(Verdict::Refuted {
            degree: 0,
            witness: format!(
                "dim Ae ⊗_B eA = {tensor} but dim AeA = {}",
                ctx.ideal_basis.cols()
            ),
        });
    }
    let (tor, terminated) = cps_tor(ctx, cutoff + 1)?;
    if let Some(n) = (1..tor.len().min(cutoff + 1)).find(|&n| tor[n] != 0) {
        return Ok(Verdict::Refuted {
            degree: n,
            witness: format!("dim Tor_{n}^B(Ae, eA) = {}", tor[n]),
        });
    }
    if terminated && tor.iter().skip(1).all(|&t| t == 0) {
        Ok(Verdict::Proven)
    } else {
        Ok(Verdict::UnknownUpTo { cutoff })
    }
}

/// Membership of `m` in `P_e^k` through degree `cutoff`, by both routes.
#[derive(Clone, Debug, Serialize)]
pub struct PeProfile {
    pub cutoff: usize,
    /// Per degree `i <= cutoff` (or up to the length of a terminated
    /// resolution): whether `P_i` lies in `add(Ae)`.
    pub terms_in_add: Vec<bool>,
    /// `dim Tor_n^A(Ā, m)` for `n <= cutoff`.
    pub tor: Vec<usize>,
    pub terminated: bool,
}

impl PeProfile {
    pub fn first_failure(&self) -> Option<usize> {
        self.terms_in_add.iter().position(|&ok| !ok)
    }
}

/// Runs both characterizations of `P_e^k` on `m` and fails with
/// [`Error::Inconsistent`] if they disagree at any degree.
pub fn pe_profile<F: Field>(m: &Module<F>, ctx: &IdealContext<F>, cutoff: usize) -> Result<PeProfile> {
    if !crate::algebra::same_algebra(m.algebra(), &ctx.a) {
        return Err(Error::AlgebraMismatch("module is not over the context algebra".into()));
    }
    let res = minimal_resolution(m, cutoff);
    let terms_in_add: Vec<bool> = res
        .steps
        .iter()
        .map(|s| in_add(&s.projective, &ctx.subset))
        .collect();
    let tor = ctx.tor_abar(m, cutoff)?;
    let profile = PeProfile {
        cutoff,
        terms_in_add,
        tor,
        terminated: res.terminated,
    };
    for k in 0..=cutoff {
        let by_terms = profile.terms_in_add.iter().take(k + 1).all(|&ok| ok);
        let by_tor = profile.tor[..=k].iter().all(|&t| t == 0);
        if by_terms != by_tor {
            return Err(Error::Inconsistent(format!(
                "P_e^{k} membership: resolution terms say {by_terms}, Tor(Ā, -) says {by_tor}"
            )));
        }
    }
    Ok(profile)
}

/// `m ∈ P_e^k`: the first `k + 1` terms of the minimal resolution lie in
/// `add(Ae)`; cross-checked against `Tor_n^A(Ā, m) = 0` for `n <= k`.
pub fn pe_k_membership<F: Field>(m: &Module<F>, ctx: &IdealContext<F>, k: usize) -> Result<bool> {
    Ok(pe_profile(m, ctx, k)?.first_failure().is_none())
}

pub fn pe_infty_check<F: Field>(m: &Module<F>, ctx: &IdealContext<F>, cutoff: usize) -> Result<Verdict> {
    let p = pe_profile(m, ctx, cutoff)?;
    Ok(pe_verdict(&p, ctx))
}

pub fn pe_verdict<F: Field>(p: &PeProfile, ctx: &IdealContext<F>) -> Verdict {
    let _ = ctx;
    match p.first_failure() {
        Some(n) => Verdict::Refuted {
            degree: n,
            witness: format!("P_{n} is not in add(Ae); dim Tor_{n}^A(Ā, -) = {}", p.tor[n]),
        },
        None if p.terminated => Verdict::Proven,
        None => Verdict::UnknownUpTo { cutoff: p.cutoff },
    }
}

/// Both routes to strong idempotency of `AeA`.
#[derive(Clone, Debug, Serialize)]
pub struct StrongIdempotency {
    pub verdict: Verdict,
    pub pe_route: Verdict,
    pub cps_route: Verdict,
    pub profile: PeProfile,
}

pub fn strongly_idempotent_report<F: Field>(ctx: &IdealContext<F>, cutoff: usize) -> Result<StrongIdempotency> {
    let profile = pe_profile(&ctx.aea_left, ctx, cutoff)?;
    let pe_route = pe_verdict(&profile, ctx);
    let cps_route = cps_check(ctx, cutoff)?;
    if pe_route.contradicts(&cps_route) {
        return Err(Error::Inconsistent(format!(
            "strong idempotency: P_e route says {pe_route}, Tor^B route says {cps_route}"
        )));
    }
    let verdict = if pe_route.is_unknown() {
        cps_route.clone()
    } else {
        pe_route.clone()
    };
    Ok(StrongIdempotency {
        verdict,
        pe_route,
        cps_route,
        profile,
    })
}

pub fn strongly_idempotent_check<F: Field>(ctx: &IdealContext<F>, cutoff: usize) -> Result<Verdict> {
    Ok(strongly_idempotent_report(ctx, cutoff)?.verdict)
}

/// `dim Ext^n` over `Ā` and over `A` for two modules killed by `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtComparison {
    pub degree: usize,
    pub over_quotient: usize,
    pub over_algebra: usize,
    pub equal: bool,
}

/// Compares `Ext_Ā^n(x, y)` with `Ext_A^n(x, y)` for `n <= cutoff`. The
/// arguments are `A`-modules annihilated by `e`.
pub fn ext_comparison<F: Field>(
    ctx: &IdealContext<F>,
    x: &Module<F>,
    y: &Module<F>,
    cutoff: usize,
) -> Result<Vec<ExtComparison>> {
    let (xq, yq) = (ctx.to_quotient(x)?, ctx.to_quotient(y)?);
    let over_q = ext_dims(&minimal_resolution(&xq, cutoff + 1), &yq)?;
    let over_a = ext_dims(&minimal_resolution(x, cutoff + 1), y)?;
    Ok((0..=cutoff)
        .map(|n| {
            let q = over_q.get(n).copied().unwrap_or(0);
            let a = over_a.get(n).copied().unwrap_or(0);
            ExtComparison {
                degree: n,
                over_quotient: q,
                over_algebra: a,
                equal: q == a,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::{proj_dim, tor_dim, DimKind};
    use crate::modules::{is_projective, projective, simple, Module};
    use crate::Q;

    #[test]
    fn r32_contexts() {
        let a = fixtures::r32::<Q>();
        for v in 0..2 {
            let ctx = build_context(&a, &[v]).unwrap();
            let s = ctx.summary();
            assert_eq!((s.dim_aea, s.dim_b, s.dim_abar), (6, 2, 1));
            assert!(s.b_local);
        }
        let ctx = build_context(&a, &[0]).unwrap();
        let labels: Vec<&str> = ctx.b_embedding.iter().map(|&k| a.labels()[k].as_str()).collect();
        assert_eq!(labels, ["e1", "ab"]);
        assert_eq!(ctx.b.nilpotency_index(), Some(2));
        assert_eq!(ctx.abar_vertices, vec![1]);
        assert!(build_context(&a, &[]).is_err());
    }

    #[test]
    fn a2_context() {
        let a = fixtures::a2::<Q>();
        let ctx = build_context(&a, &[1]).unwrap();
        assert_eq!(ctx.ideal_basis.cols(), 2);
        assert_eq!(ctx.abar.dim(), 1);
        assert_eq!(ctx.abar.vertex_labels(), ["1"]);
        // AeA = P2 ⊕ P2 on the left
        assert!(is_projective(&ctx.aea_left));
        assert_eq!(ctx.aea_left.dim_vector(), vec![0, 2]);
    }

    #[test]
    fn whole_vertex_set_gives_zero_quotient() {
        let a = fixtures::r32::<Q>();
        let ctx = build_context(&a, &[0, 1]).unwrap();
        assert_eq!(ctx.abar.dim(), 0);
        assert_eq!(ctx.b.dim(), 7);
        assert_eq!(strongly_idempotent_check(&ctx, 4).unwrap(), Verdict::Proven);
    }

    #[test]
    fn multiplication_maps() {
        let a = fixtures::r32::<Q>();
        assert!(multiplication_map_check(&build_context(&a, &[0]).unwrap()).unwrap());
        let b = fixtures::a2::<Q>();
        assert!(multiplication_map_check(&build_context(&b, &[1]).unwrap()).unwrap());
    }

    #[test]
    fn cps_verdicts() {
        let a = fixtures::r32::<Q>();
        let ctx = build_context(&a, &[0]).unwrap();
        assert!(!cps_check(&ctx, 12).unwrap().is_refuted());
        let b = fixtures::a2::<Q>();
        let ctx = build_context(&b, &[1]).unwrap();
        assert_eq!(cps_check(&ctx, 12).unwrap(), Verdict::Proven);
    }

    #[test]
    fn pe_membership() {
        let a = fixtures::r32::<Q>();
        let c2 = build_context(&a, &[1]).unwrap();
        for k in 0..4 {
            assert!(pe_k_membership(&projective(&a, 1), &c2, k).unwrap());
        }
        assert!(!pe_k_membership(&simple(&a, 0), &c2, 0).unwrap());
        assert_eq!(
            pe_infty_check(&simple(&a, 0), &c2, 12).unwrap(),
            Verdict::Refuted {
                degree: 0,
                witness: "P_0 is not in add(Ae); dim Tor_0^A(Ā, -) = 1".into()
            }
        );
        let c1 = build_context(&a, &[0]).unwrap();
        assert!(pe_k_membership(&c1.aea_left, &c1, 12).unwrap());
        let p = pe_profile(&c1.aea_left, &c1, 12).unwrap();
        assert_eq!(p.terms_in_add, vec![true; 13]);
        assert!(!p.terminated);
        assert_eq!(pe_verdict(&p, &c1), Verdict::UnknownUpTo { cutoff: 12 });
        assert_eq!(pe_infty_check(&Module::zero(a.clone()), &c1, 12).unwrap(), Verdict::Proven);
    }

    #[test]
    fn strong_idempotency() {
        let a = fixtures::r32::<Q>();
        let r = strongly_idempotent_report(&build_context(&a, &[0]).unwrap(), 12).unwrap();
        assert!(!r.verdict.is_refuted());
        assert!(!r.cps_route.is_refuted());
        let b = fixtures::a2::<Q>();
        assert_eq!(
            strongly_idempotent_check(&build_context(&b, &[1]).unwrap(), 12).unwrap(),
            Verdict::Proven
        );
    }

    #[test]
    fn quotient_tensors() {
        let a = fixtures::r32::<Q>();
        let c1 = build_context(&a, &[0]).unwrap();
        assert_eq!(tensor_dim(&c1.abar_right, &c1.ae).unwrap(), 0);
        let s2 = simple(&a, 1);
        assert_eq!(tensor_dim(&c1.abar_right, &s2).unwrap(), 1);
        assert_eq!(tor_dim(&c1.abar_right, &s2, 0).unwrap(), 1);
        assert_eq!(tor_dim(&c1.abar_right, &s2, 1).unwrap(), 0);
        // with e = e2 the roles flip: Ā is the simple at vertex 1
        let c2 = build_context(&a, &[1]).unwrap();
        assert_eq!(tor_dim(&c2.abar_right, &s2, 0).unwrap(), 0);
        assert_eq!(tor_dim(&c2.abar_right, &s2, 1).unwrap(), 1);
    }

    #[test]
    fn restriction() {
        let a = fixtures::r32::<Q>();
        let c1 = build_context(&a, &[0]).unwrap();
        let es1 = c1.restrict(&simple(&a, 0)).unwrap();
        assert_eq!(es1.dim(), 1);
        assert!(c1.b.radical_basis().iter().all(|&r| es1.action(r).is_zero()));
        assert!(c1.restrict(&simple(&a, 1)).unwrap().is_zero());
        let ep = c1.restrict(&projective(&a, 0)).unwrap();
        assert!(is_projective(&ep));
        let v = proj_dim(&es1, 12);
        assert_eq!(v.kind, DimKind::AtLeast(13));
        assert_eq!(v.certificate.map(|c| c.period), Some(1));
    }

    #[test]
    fn quotient_modules_round_trip() {
        let a = fixtures::r32::<Q>();
        let c1 = build_context(&a, &[0]).unwrap();
        let s2 = simple(&a, 1);
        let q = c1.to_quotient(&s2).unwrap();
        assert_eq!(q.dim(), 1);
        let back = c1.inflate(&q).unwrap();
        assert_eq!(back.vertices(), s2.vertices());
        assert!(c1.to_quotient(&simple(&a, 0)).is_err());
    }

    #[test]
    fn ext_over_quotient_matches() {
        let a = fixtures::r32::<Q>();
        let c1 = build_context(&a, &[0]).unwrap();
        let s2 = simple(&a, 1);
        let cmp = ext_comparison(&c1, &s2, &s2, 12).unwrap();
        assert_eq!(cmp.len(), 13);
        assert!(cmp.iter().all(|c| c.equal));
        assert_eq!(cmp[0].over_algebra, 1);
    }
}
