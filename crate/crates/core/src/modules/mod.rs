//! Finite-dimensional left modules over an [`Algebra`].
//!
//! Modules carry the action matrix of every algebra basis element and always
//! use a vertex-adapted basis: each basis vector lies in some `e_v M`, so
//! `e_v` acts as the coordinate projector onto the vectors tagged `v`.
//! A right module is represented as a left module over the opposite algebra.

mod functors;

use std::sync::Arc;

use crate::algebra::{same_algebra, AlgebraRef, Sparse};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};

pub use functors::*;

#[derive(Clone, Debug)]
pub struct Module<F> {
    algebra: AlgebraRef<F>,
    vertex: Arc<Vec<usize>>,
    actions: Arc<Vec<Matrix<F>>>,
}

/// A module homomorphism; `matrix` is `target.dim() x source.dim()`.
#[derive(Clone, Debug)]
pub struct ModuleMap<F> {
    pub source: Module<F>,
    pub target: Module<F>,
    pub matrix: Matrix<F>,
}

impl<F: Field> Module<F> {
    /// Builds a module from actions in a vertex-adapted basis and checks that
    /// the action is a unital algebra homomorphism.
    pub fn from_adapted(
        algebra: AlgebraRef<F>,
        vertex: Vec<usize>,
        actions: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let m = Module {
            algebra,
            vertex: Arc::new(vertex),
            actions: Arc::new(actions),
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds a module from arbitrary action matrices (one per basis element),
    /// changing to a vertex-adapted basis. Returns the module and the base
    /// change `T` whose columns are the new basis in old coordinates.
    pub fn from_actions(algebra: AlgebraRef<F>, actions: Vec<Matrix<F>>) -> Result<(Self, Matrix<F>)> {
        if actions.len() != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {}",
                actions.len(),
                algebra.dim()
            )));
        }
        let dim = actions.first().map_or(0, Matrix::rows);
        if actions.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::InvalidModule("action matrices must be square of equal size".into()));
        }
        let mut cols = Vec::new();
        let mut vertex = Vec::new();
        for v in 0..algebra.num_vertices() {
            let image = actions[algebra.idempotent(v)].column_space();
            for c in image.columns() {
                cols.push(c);
                vertex.push(v);
            }
        }
        let t = Matrix::from_columns(dim, &cols)?;
        if t.cols() != dim || t.rank() != dim {
            return Err(Error::InvalidModule(
                "idempotents do not decompose the module (unit does not act as identity)".into(),
            ));
        }
        let tinv = t
            .solve_matrix(&Matrix::identity(dim))?
            .expect("base change is invertible");
        let new_actions = actions.iter().map(|a| tinv.mul(&a.mul(&t))).collect();
        let m = Module::from_adapted(algebra, vertex, new_actions)?;
        Ok((m, t))
    }

    /// Builds a module over a monomial algebra from a quiver representation:
    /// `dims[v]` is `dim e_v M` and `arrows[a]` is the `d_t x d_s` matrix of
    /// arrow `a : s -> t`. A path acts as the product of its arrow matrices,
    /// the first arrow applied first. Relations must act as zero.
    pub fn from_representation(algebra: AlgebraRef<F>, dims: &[usize], arrows: &[Matrix<F>]) -> Result<Self> {
        let mono = algebra
            .monomial()
            .ok_or_else(|| Error::Precondition("representations need a monomial algebra".into()))?;
        let q = &mono.presentation.quiver;
        if dims.len() != q.vertices().len() || arrows.len() != q.arrows().len() {
            return Err(Error::InvalidModule(format!(
                "representation needs {} dimensions and {} arrow matrices",
                q.vertices().len(),
                q.arrows().len()
            )));
        }
        for (a, m) in q.arrows().iter().zip(arrows) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::InvalidModule(format!(
                    "matrix of arrow {} is {}x{}, expected {}x{}",
                    a.label,
                    m.rows(),
                    m.cols(),
                    dims[a.target],
                    dims[a.source]
                )));
            }
        }
        for r in &mono.presentation.relations {
            let mut prod = Matrix::identity(dims[q.arrows()[r[0]].source]);
            for &a in r {
                prod = arrows[a].mul(&prod);
            }
            if !prod.is_zero() {
                return Err(Error::InvalidModule(format!(
                    "relation {} does not act as zero",
                    crate::algebra::word_label(q, r)
                )));
            }
        }
        let mut offset = vec![0; dims.len()];
        for v in 1..dims.len() {
            offset[v] = offset[v - 1] + dims[v - 1];
        }
        let n: usize = dims.iter().sum();
        let vertex: Vec<usize> = (0..dims.len()).flat_map(|v| std::iter::repeat(v).take(dims[v])).collect();
        let actions = mono
            .paths
            .iter()
            .map(|p| {
                let s = p.start;
                let t = p.end(q);
                let mut block = Matrix::identity(dims[s]);
                for &a in &p.arrows {
                    block = arrows[a].mul(&block);
                }
                let mut full = Matrix::zeros(n, n);
                for i in 0..dims[t] {
                    for j in 0..dims[s] {
                        let c = block.get(i, j);
                        if !c.is_zero() {
                            full.set(offset[t] + i, offset[s] + j, c.clone());
                        }
                    }
                }
                full
            })
            .collect();
        Module::from_adapted(algebra, vertex, actions)
    }

    /// Dimension vector and arrow matrices of a module over a monomial
    /// algebra, in the module's own basis order at each vertex.
    pub fn representation(&self) -> Result<(Vec<usize>, Vec<Matrix<F>>)> {
        let mono = self
            .algebra
            .monomial()
            .ok_or_else(|| Error::Precondition("representations need a monomial algebra".into()))?;
        let q = &mono.presentation.quiver;
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let b = mono
                    .paths
                    .iter()
                    .position(|p| p.arrows == [ai])
                    .expect("every arrow is a basis path");
                let (rows, cols) = (self.coords_at(a.target), self.coords_at(a.source));
                let mut m = Matrix::zeros(rows.len(), cols.len());
                for (i, &r) in rows.iter().enumerate() {
                    for (j, &c) in cols.iter().enumerate() {
                        m.set(i, j, self.actions[b].get(r, c).clone());
                    }
                }
                m
            })
            .collect();
        Ok((self.dim_vector(), mats))
    }

    pub fn zero(algebra: AlgebraRef<F>) -> Self {
        let d = algebra.dim();
        Module {
            algebra,
            vertex: Arc::new(Vec::new()),
            actions: Arc::new(vec![Matrix::zeros(0, 0); d]),
        }
    }

    fn validate(&self) -> Result<()> {
        let alg = &self.algebra;
        let n = self.dim();
        if self.actions.len() != alg.dim() {
            return Err(Error::InvalidModule("one action per basis element required".into()));
        }
        if self.vertex.iter().any(|&v| v >= alg.num_vertices()) {
            return Err(Error::InvalidModule("vertex tag out of range".into()));
        }
        for a in self.actions.iter() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::InvalidModule("action matrix has wrong size".into()));
            }
        }
        // idempotents act as coordinate projectors
        for v in 0..alg.num_vertices() {
            let a = &self.actions[alg.idempotent(v)];
            for i in 0..n {
                for j in 0..n {
                    let expect = i == j && self.vertex[i] == v;
                    let x = a.get(i, j);
                    if (expect && !x.is_one()) || (!expect && !x.is_zero()) {
                        return Err(Error::InvalidModule(format!(
                            "idempotent e{} does not act as the vertex projector",
                            alg.vertex_labels()[v]
                        )));
                    }
                }
            }
        }
        // each basis element maps e_s M into e_t M
        for b in 0..alg.dim() {
            let (t, s) = (alg.left_vertex(b), alg.right_vertex(b));
            let a = &self.actions[b];
            for i in 0..n {
                for j in 0..n {
                    if (self.vertex[i] != t || self.vertex[j] != s) && !a.get(i, j).is_zero() {
                        return Err(Error::InvalidModule(format!(
                            "action of {} leaves its Peirce block",
                            alg.labels()[b]
                        )));
                    }
                }
            }
        }
        // multiplicativity against generators is enough: generators and
        // idempotents generate the algebra
        for &g in alg.generators() {
            for b in 0..alg.dim() {
                if alg.right_vertex(g) != alg.left_vertex(b) {
                    continue;
                }
                let lhs = self.actions[g].mul(&self.actions[b]);
                let rhs = self.act_sparse(alg.basis_product(g, b));
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "action is not multiplicative on ({}, {})",
                        alg.labels()[g],
                        alg.labels()[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &AlgebraRef<F> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vertex.is_empty()
    }

    /// Vertex tag of each basis vector.
    pub fn vertices(&self) -> &[usize] {
        &self.vertex
    }

    pub fn action(&self, b: usize) -> &Matrix<F> {
        &self.actions[b]
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.actions
    }

    /// Action of a linear combination of basis elements.
    pub fn act_sparse(&self, x: &Sparse<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for (k, c) in x {
            out.add_scaled(c, &self.actions[*k]);
        }
        out
    }

    pub fn act_element(&self, x: &[F]) -> Matrix<F> {
        let sparse: Sparse<F> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        self.act_sparse(&sparse)
    }

    /// `dim e_v M` for every vertex.
    pub fn dim_vector(&self) -> Vec<usize> {
        let mut d = vec![0; self.algebra.num_vertices()];
        for &v in self.vertex.iter() {
            d[v] += 1;
        }
        d
    }

    /// Coordinates lying at vertex `v`.
    pub fn coords_at(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.vertex[i] == v).collect()
    }

    pub fn check_same_algebra(&self, other: &Module<F>) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(
                "modules are over different algebras".into(),
            ))
        }
    }

    /// True if `matrix` (target x source) intertwines every basis action.
    pub fn intertwines(source: &Module<F>, target: &Module<F>, matrix: &Matrix<F>) -> bool {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return false;
        }
        (0..source.algebra.dim()).all(|b| {
            target.actions[b].mul(matrix) == matrix.mul(&source.actions[b])
        })
    }
}

impl<F: Field> ModuleMap<F> {
    pub fn new(source: Module<F>, target: Module<F>, matrix: Matrix<F>) -> Result<Self> {
        source.check_same_algebra(&target)?;
        if !Module::intertwines(&source, &target, &matrix) {
            return Err(Error::InvalidModule("matrix is not a module homomorphism".into()));
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }
}
