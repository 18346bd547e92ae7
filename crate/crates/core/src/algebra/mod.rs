//! Finite-dimensional basic algebras given by structure constants.
//!
//! Every algebra here has a basis of the form {primitive idempotents} ∪
//! {radical basis}, and every basis element `b` is Peirce homogeneous:
//! `e_t b e_s = b` for exactly one pair `(t, s)`. Products use composition
//! order, so for paths `p * q` means "`q` first, then `p`", and a path from
//! `s` to `t` lives in `e_t A e_s`.

mod quiver;

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exactlin::{Field, FieldSpec, Matrix};

pub use quiver::{word_label, Arrow, MonomialPresentation, Path, Quiver, PATH_BUDGET};

/// Sparse coefficient vector: `(basis index, coefficient)` with nonzero coefficients.
pub type Sparse<F> = Vec<(usize, F)>;

/// Coefficient vector over an algebra basis.
pub type AlgebraElement<F> = Vec<F>;

/// Path data kept alongside algebras built from monomial presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialData {
    pub presentation: MonomialPresentation,
    /// `paths[i]` is basis element `i`.
    pub paths: Vec<Path>,
}

#[derive(Clone, Debug)]
pub struct Algebra<F> {
    dim: usize,
    labels: Vec<String>,
    vertex_labels: Vec<String>,
    idempotents: Vec<usize>,
    left: Vec<usize>,
    right: Vec<usize>,
    radical: Vec<usize>,
    generators: Vec<usize>,
    products: Vec<Sparse<F>>,
    monomial: Option<MonomialData>,
    opposite: OnceLock<AlgebraRef<F>>,
}

/// An algebra given by structure constants, validated by
/// [`Algebra::from_structure`].
pub struct StructureConstants<F> {
    pub labels: Vec<String>,
    pub vertex_labels: Vec<String>,
    /// Basis index of each primitive idempotent.
    pub idempotents: Vec<usize>,
    /// `products[i * dim + j]` is `b_i * b_j`.
    pub products: Vec<Sparse<F>>,
}

impl<F: Field> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.idempotents == other.idempotents
            && self.products == other.products
    }
}

impl<F: Field> Eq for Algebra<F> {}

impl<F: Field> Algebra<F> {
    /// Validates and builds an algebra. Checks associativity on all basis
    /// triples, orthogonality and completeness of the idempotents, Peirce
    /// homogeneity of the basis and nilpotency of the radical.
    pub fn from_structure(sc: StructureConstants<F>) -> Result<Self> {
        let dim = sc.labels.len();
        if sc.products.len() != dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} products, got {}",
                dim * dim,
                sc.products.len()
            )));
        }
        if sc.vertex_labels.len() != sc.idempotents.len() {
            return Err(Error::InvalidAlgebra("one label per idempotent required".into()));
        }
        if sc.products.iter().flatten().any(|(k, x)| *k >= dim || x.is_zero()) {
            return Err(Error::InvalidAlgebra("malformed sparse product".into()));
        }
        let mut alg = Algebra {
            dim,
            labels: sc.labels,
            vertex_labels: sc.vertex_labels,
            idempotents: sc.idempotents,
            left: vec![usize::MAX; dim],
            right: vec![usize::MAX; dim],
            radical: Vec::new(),
            generators: Vec::new(),
            products: sc.products,
            monomial: None,
            opposite: OnceLock::new(),
        };
        // idempotents
        for (v, &ev) in alg.idempotents.iter().enumerate() {
            if ev >= dim {
                return Err(Error::InvalidAlgebra("idempotent index out of range".into()));
            }
            for (w, &ew) in alg.idempotents.iter().enumerate() {
                let expect: Sparse<F> = if v == w { vec![(ev, F::one())] } else { vec![] };
                if alg.products[ev * dim + ew] != expect {
                    return Err(Error::InvalidAlgebra(format!(
                        "idempotents {} and {} are not orthogonal idempotents",
                        alg.vertex_labels[v], alg.vertex_labels[w]
                    )));
                }
            }
        }
        // Peirce blocks; this also proves that sum e_v is a two-sided unit
        for b in 0..dim {
            for (v, &ev) in alg.idempotents.iter().enumerate() {
                let l = &alg.products[ev * dim + b];
                if *l == vec![(b, F::one())] {
                    if alg.left[b] != usize::MAX {
                        return Err(Error::InvalidAlgebra("basis not Peirce homogeneous".into()));
                    }
                    alg.left[b] = v;
                } else if !l.is_empty() {
                    return Err(Error::InvalidAlgebra(format!(
                        "basis element {} is not Peirce homogeneous",
                        alg.labels[b]
                    )));
                }
                let r = &alg.products[b * dim + ev];
                if *r == vec![(b, F::one())] {
                    if alg.right[b] != usize::MAX {
                        return Err(Error::InvalidAlgebra("basis not Peirce homogeneous".into()));
                    }
                    alg.right[b] = v;
                } else if !r.is_empty() {
                    return Err(Error::InvalidAlgebra(format!(
                        "basis element {} is not Peirce homogeneous",
                        alg.labels[b]
                    )));
                }
            }
            if alg.left[b] == usize::MAX || alg.right[b] == usize::MAX {
                return Err(Error::InvalidAlgebra(format!(
                    "idempotents do not sum to the unit on {}",
                    alg.labels.get(b).cloned().unwrap_or_default()
                )));
            }
        }
        alg.radical = (0..dim).filter(|b| !alg.idempotents.contains(b)).collect();
        // radical is a two-sided ideal: no idempotent components in products
        for &r in &alg.radical {
            for b in 0..dim {
                for p in [&alg.products[r * dim + b], &alg.products[b * dim + r]] {
                    if p.iter().any(|(k, _)| alg.idempotents.contains(k)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "radical element {} does not generate a radical ideal",
                            alg.labels[r]
                        )));
                    }
                }
            }
        }
        alg.check_associative()?;
        alg.generators = alg.compute_generators();
        if alg.nilpotency_index().is_none() {
            return Err(Error::InvalidAlgebra("radical is not nilpotent".into()));
        }
        Ok(alg)
    }

    /// The algebra `kQ/I` for a monomial presentation.
    pub fn from_monomial(p: &MonomialPresentation) -> Result<Self> {
        if F::spec() != p.field {
            return Err(Error::InvalidAlgebra(format!(
                "presentation is over {} but the algebra is built over {}",
                p.field,
                F::spec()
            )));
        }
        let paths = p.path_basis()?;
        let q = &p.quiver;
        let index: std::collections::HashMap<&Path, usize> =
            paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let dim = paths.len();
        let mut products = vec![Vec::new(); dim * dim];
        for (i, pi) in paths.iter().enumerate() {
            for (j, pj) in paths.iter().enumerate() {
                // b_i * b_j = b_j then b_i
                if pj.end(q) != pi.start {
                    continue;
                }
                let prod = if pj.is_trivial() {
                    pi.clone()
                } else {
                    let mut arrows = pj.arrows.clone();
                    arrows.extend_from_slice(&pi.arrows);
                    Path {
                        start: pj.start,
                        arrows,
                    }
                };
                if let Some(&k) = index.get(&prod) {
                    products[i * dim + j] = vec![(k, F::one())];
                }
            }
        }
        let idempotents = (0..q.vertices().len())
            .map(|v| index[&Path::trivial(v)])
            .collect();
        let mut alg = Self::from_structure(StructureConstants {
            labels: paths.iter().map(|p| p.label(q)).collect(),
            vertex_labels: q.vertices().to_vec(),
            idempotents,
            products,
        })?;
        alg.monomial = Some(MonomialData {
            presentation: p.clone(),
            paths,
        });
        Ok(alg)
    }

    /// Same basis with `c'[i][j] = c[j][i]`.
    pub fn opposite(&self) -> Self {
        let dim = self.dim;
        let mut products = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                products[i * dim + j] = self.products[j * dim + i].clone();
            }
        }
        let monomial = self.monomial.as_ref().map(|m| {
            let q = &m.presentation.quiver;
            MonomialData {
                presentation: m.presentation.opposite(),
                paths: m
                    .paths
                    .iter()
                    .map(|p| Path {
                        start: p.end(q),
                        arrows: p.arrows.iter().rev().copied().collect(),
                    })
                    .collect(),
            }
        });
        Algebra {
            dim,
            labels: self.labels.clone(),
            vertex_labels: self.vertex_labels.clone(),
            idempotents: self.idempotents.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
            radical: self.radical.clone(),
            generators: self.generators.clone(),
            products,
            monomial,
            opposite: OnceLock::new(),
        }
    }

    /// Shared handle to the opposite algebra, built once.
    pub fn opposite_ref(&self) -> AlgebraRef<F> {
        self.opposite
            .get_or_init(|| Arc::new(self.opposite()))
            .clone()
    }

    pub fn field(&self) -> FieldSpec {
        F::spec()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.idempotents.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|v| v == label)
    }

    /// Basis index of the idempotent at vertex `v`.
    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// Vertex `t` with `e_t b = b`.
    pub fn left_vertex(&self, b: usize) -> usize {
        self.left[b]
    }

    /// Vertex `s` with `b e_s = b`.
    pub fn right_vertex(&self, b: usize) -> usize {
        self.right[b]
    }

    pub fn radical_basis(&self) -> &[usize] {
        &self.radical
    }

    /// Radical basis elements spanning `rad / rad^2`; together with the
    /// idempotents they generate the algebra.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_radical(&self, b: usize) -> bool {
        !self.idempotents.contains(&b)
    }

    pub fn monomial(&self) -> Option<&MonomialData> {
        self.monomial.as_ref()
    }

    pub fn is_local(&self) -> bool {
        self.idempotents.len() == 1
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Sparse<F> {
        &self.products[i * self.dim + j]
    }

    pub fn unit(&self) -> AlgebraElement<F> {
        let mut u = vec![F::zero(); self.dim];
        for &e in &self.idempotents {
            u[e] = F::one();
        }
        u
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement<F> {
        let mut x = vec![F::zero(); self.dim];
        x[i] = F::one();
        x
    }

    pub fn multiply(&self, x: &[F], y: &[F]) -> Result<AlgebraElement<F>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::Dimension(format!(
                "elements of length {} and {} in an algebra of dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        let mut out = vec![F::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in &self.products[i * self.dim + j] {
                    out[*k] = out[*k].clone() + xi.clone() * yj.clone() * c.clone();
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `x -> b * x` in the algebra basis.
    pub fn left_mult_matrix(&self, b: usize) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in &self.products[b * self.dim + j] {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// Matrix of `x -> x * b` in the algebra basis.
    pub fn right_mult_matrix(&self, b: usize) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in &self.products[j * self.dim + b] {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    fn mul_sparse(&self, x: &Sparse<F>, y: &Sparse<F>) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in &self.products[i * self.dim + j] {
                    out[*k] = out[*k].clone() + a.clone() * b.clone() * c.clone();
                }
            }
        }
        out
    }

    fn check_associative(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let ij = &self.products[i * d + j];
                for k in 0..d {
                    // cheap Peirce filter: both sides vanish unless blocks compose
                    if self.right[i] != self.left[j] || self.right[j] != self.left[k] {
                        continue;
                    }
                    let lhs = self.mul_sparse(ij, &vec![(k, F::one())]);
                    let rhs = self.mul_sparse(&vec![(i, F::one())], &self.products[j * d + k]);
                    if lhs != rhs {
                        return Err(Error::InvalidAlgebra(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        // products across non-composable blocks must vanish
        for i in 0..d {
            for j in 0..d {
                if self.right[i] != self.left[j] && !self.products[i * d + j].is_empty() {
                    return Err(Error::InvalidAlgebra(format!(
                        "product {} * {} crosses Peirce blocks",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Columns spanning `rad^2`.
    fn radical_square(&self) -> Matrix<F> {
        let cols: Vec<Vec<F>> = self
            .radical
            .iter()
            .flat_map(|&r| self.radical.iter().map(move |&s| (r, s)))
            .map(|(r, s)| self.mul_sparse(&vec![(r, F::one())], &vec![(s, F::one())]))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        Matrix::from_columns(self.dim, &cols)
            .expect("columns have algebra dimension")
            .column_space()
    }

    fn compute_generators(&self) -> Vec<usize> {
        let mut span = self.radical_square();
        let mut gens = Vec::new();
        for &r in &self.radical {
            let col = Matrix::from_columns(self.dim, &[self.basis_element(r)]).unwrap();
            let ext = span.hstack(&col);
            if ext.rank() > span.cols() {
                span = ext;
                gens.push(r);
            }
        }
        gens
    }

    /// Smallest `N` with `rad^N = 0`, or `None` if no such `N <= dim + 1`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let mut power: Vec<Vec<F>> = self.radical.iter().map(|&r| self.basis_element(r)).collect();
        let mut n = 1;
        while !power.is_empty() {
            if n > self.dim + 1 {
                return None;
            }
            let mut next = Vec::new();
            for &r in &self.radical {
                for x in &power {
                    let sx: Sparse<F> = x
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (i, c.clone()))
                        .collect();
                    let v = self.mul_sparse(&vec![(r, F::one())], &sx);
                    if v.iter().any(|c| !c.is_zero()) {
                        next.push(v);
                    }
                }
            }
            power = if next.is_empty() {
                next
            } else {
                Matrix::from_columns(self.dim, &next).unwrap().column_space().columns()
            };
            n += 1;
        }
        Some(n)
    }

    /// Basis indices of `e_t A e_s`.
    pub fn block(&self, t: usize, s: usize) -> Vec<usize> {
        (0..self.dim)
            .filter(|&b| self.left[b] == t && self.right[b] == s)
            .collect()
    }

    /// Human-readable element.
    pub fn format_element(&self, x: &[F]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_one() {
                    self.labels[i].clone()
                } else {
                    format!("{}*{}", c, self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Shared handle; modules keep one of these to their algebra.
pub type AlgebraRef<F> = Arc<Algebra<F>>;

/// True when both handles denote the same algebra (pointer or structural).
pub fn same_algebra<F: Field>(a: &AlgebraRef<F>, b: &AlgebraRef<F>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    use crate::fixtures;
    use crate::Q;

    #[test]
    fn field_algebra() {
        let a = fixtures::field_algebra::<Q>();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.radical_basis().len(), 0);
        assert_eq!(a.nilpotency_index(), Some(1));
    }

    #[test]
    fn r32_structure() {
        let a = fixtures::r32::<Q>();
        assert_eq!(a.dim(), 7);
        assert_eq!(a.radical_basis().len(), 5);
        assert_eq!(a.generators().len(), 2);
        // primitive: each corner e_v A e_v has a one-dimensional top
        for v in 0..2 {
            let corner = a.block(v, v);
            let rad = corner.iter().filter(|&&b| a.is_radical(b)).count();
            assert_eq!(corner.len() - rad, 1);
        }
        let total: usize = (0..2)
            .flat_map(|t| (0..2).map(move |s| (t, s)))
            .map(|(t, s)| a.block(t, s).len())
            .sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn a2_structure() {
        let a = fixtures::a2::<Q>();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.radical_basis().len(), 1);
    }

    #[test]
    fn r32_multiplication() {
        let a = fixtures::r32::<Q>();
        let el = |l: &str| a.basis_element(a.labels().iter().position(|x| x == l).unwrap());
        let u = a.unit();
        let x = el("aba");
        assert_eq!(a.multiply(&u, &x).unwrap(), x);
        // composition order: b * a means a first, then b, i.e. the path `ab`
        assert_eq!(a.multiply(&el("b"), &el("a")).unwrap(), el("ab"));
        let ab = a.multiply(&el("b"), &el("a")).unwrap();
        assert!(a.multiply(&el("b"), &ab).unwrap().iter().all(Zero::is_zero));
        // b then a then b is the relation
        let ba = a.multiply(&el("a"), &el("b")).unwrap();
        assert_eq!(ba, el("ba"));
        assert!(a.multiply(&el("b"), &ba).unwrap().iter().all(Zero::is_zero));
        assert!(a.multiply(&u, &[Q::one()]).is_err());
    }

    #[test]
    fn opposite_is_involutive() {
        let a = fixtures::r32::<Q>();
        let op = a.opposite();
        assert_eq!(op.dim(), 7);
        assert_ne!(op, *a);
        assert_eq!(op.opposite(), *a);
        // commutative algebra k[x]/(x^2) equals its opposite
        let l = fixtures::dual_numbers::<Q>();
        assert_eq!(l.opposite(), *l);
    }

    #[test]
    fn non_associative_rejected() {
        // basis e, x, y with x*x = y but x*y = 0 and y*x = x: not associative
        let f = |k: usize| vec![(k, Q::one())];
        let products = vec![
            f(0), f(1), f(2), //
            f(1), f(2), vec![], //
            f(2), f(1), vec![],
        ];
        let r = Algebra::from_structure(StructureConstants {
            labels: vec!["e".into(), "x".into(), "y".into()],
            vertex_labels: vec!["1".into()],
            idempotents: vec![0],
            products,
        });
        assert!(r.is_err());
    }
}
