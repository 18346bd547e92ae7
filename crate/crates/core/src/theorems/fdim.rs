//! Certified values of the finitistic projective dimension.

use serde::Serialize;

use crate::algebra::AlgebraRef;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::homology::proj_dim;
use crate::modules::{simple, Module};

/// How an fdim value was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FdimMethod {
    /// A local algebra has finitistic dimension 0.
    LocalZero,
    /// Every simple has finite projective dimension, so the global dimension
    /// `gd` is finite and equals fdim.
    GlobalDimBound { gd: usize },
    /// Maximum over every representation of total dimension at most
    /// `max_dim` with terminating resolution. Only a lower bound.
    ExhaustiveSearch { max_dim: usize, modules: usize },
    /// Supplied by the user, unverified.
    UserAsserted,
}

/// Requested certification method.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdimRequest {
    LocalZero,
    GlobalDimBound,
    ExhaustiveSearch { max_dim: usize },
    UserAsserted { value: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FdimCertificate {
    /// Short description of the algebra, e.g. `dim 2, vertices [1]`.
    pub algebra: String,
    pub value: usize,
    pub method: FdimMethod,
    /// Modules attaining or bounding the value, with their projective dimension.
    pub witnesses: Vec<(String, usize)>,
    /// True when `value` is the exact finitistic dimension.
    pub certified: bool,
}

fn describe<F: Field>(a: &AlgebraRef<F>) -> String {
    format!("dim {}, vertices [{}]", a.dim(), a.vertex_labels().join(", "))
}

/// Upper limit on the number of representations an exhaustive search visits.
pub const SEARCH_BUDGET: usize = 200_000;

pub fn fdim_certificate<F: Field>(a: &AlgebraRef<F>, request: FdimRequest, cutoff: usize) -> Result<FdimCertificate> {
    match request {
        FdimRequest::LocalZero => {
            if !a.is_local() {
                return Err(Error::Precondition(format!(
                    "LocalZero needs a local algebra; this one has {} vertices",
                    a.num_vertices()
                )));
            }
            Ok(FdimCertificate {
                algebra: describe(a),
                value: 0,
                method: FdimMethod::LocalZero,
                witnesses: vec![(format!("P{}", a.vertex_labels()[0]), 0)],
                certified: true,
            })
        }
        FdimRequest::GlobalDimBound => {
            let mut witnesses = Vec::new();
            for (v, label) in a.vertex_labels().iter().enumerate() {
                let pd = proj_dim(&simple(a, v), cutoff);
                match pd.exact() {
                    Some(d) => witnesses.push((format!("S{label}"), d)),
                    None => {
                        return Err(Error::Precondition(format!(
                            "S{label} has pd {pd}; global dimension is not certified"
                        )))
                    }
                }
            }
            let gd = witnesses.iter().map(|w| w.1).max().unwrap_or(0);
            witnesses.retain(|w| w.1 == gd);
            Ok(FdimCertificate {
                algebra: describe(a),
                value: gd,
                method: FdimMethod::GlobalDimBound { gd },
                witnesses,
                certified: true,
            })
        }
        FdimRequest::ExhaustiveSearch { max_dim } => exhaustive_search(a, max_dim, cutoff),
        FdimRequest::UserAsserted { value } => Ok(FdimCertificate {
            algebra: describe(a),
            value,
            method: FdimMethod::UserAsserted,
            witnesses: Vec::new(),
            certified: false,
        }),
    }
}

/// `LocalZero` for local algebras, otherwise `GlobalDimBound` when every
/// simple has finite projective dimension; `None` if neither applies.
pub fn auto_certificate<F: Field>(a: &AlgebraRef<F>, cutoff: usize) -> Option<FdimCertificate> {
    if a.is_local() {
        return fdim_certificate(a, FdimRequest::LocalZero, cutoff).ok();
    }
    fdim_certificate(a, FdimRequest::GlobalDimBound, cutoff).ok()
}

fn exhaustive_search<F: Field>(a: &AlgebraRef<F>, max_dim: usize, cutoff: usize) -> Result<FdimCertificate> {
    let elements = F::elements()
        .ok_or_else(|| Error::Precondition("exhaustive search needs a finite field".into()))?;
    let mono = a
        .monomial()
        .ok_or_else(|| Error::Precondition("exhaustive search needs a monomial algebra".into()))?;
    let q = &mono.presentation.quiver;
    let nv = q.vertices().len();
    let mut best: Option<(usize, String)> = None;
    let mut visited = 0usize;
    for dims in dimension_vectors(nv, max_dim) {
        let mut search = RepSearch {
            a,
            dims: &dims,
            elements: &elements,
            chosen: Vec::new(),
            visited: &mut visited,
            best: &mut best,
            cutoff,
        };
        search.run()?;
    }
    let (value, witnesses) = match best {
        Some((v, name)) => (v, vec![(name, v)]),
        None => (0, Vec::new()),
    };
    Ok(FdimCertificate {
        algebra: describe(a),
        value,
        method: FdimMethod::ExhaustiveSearch {
            max_dim,
            modules: visited,
        },
        witnesses,
        certified: false,
    })
}

/// Nonzero dimension vectors with total at most `max_dim`, in lexicographic order.
fn dimension_vectors(nv: usize, max_dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..nv {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                let used: usize = prefix.iter().sum();
                (0..=max_dim - used).map(move |d| {
                    let mut p = prefix.clone();
                    p.push(d);
                    p
                })
            })
            .collect();
    }
    out.retain(|d| d.iter().any(|&x| x > 0));
    out
}

struct RepSearch<'a, F: Field> {
    a: &'a AlgebraRef<F>,
    dims: &'a [usize],
    elements: &'a [F],
    chosen: Vec<Matrix<F>>,
    visited: &'a mut usize,
    best: &'a mut Option<(usize, String)>,
    cutoff: usize,
}

impl<F: Field> RepSearch<'_, F> {
    fn run(&mut self) -> Result<()> {
        let mono = self.a.monomial().expect("checked monomial");
        let q = &mono.presentation.quiver;
        let k = self.chosen.len();
        if k == q.arrows().len() {
            *self.visited += 1;
            if *self.visited > SEARCH_BUDGET {
                return Err(Error::Budget(format!(
                    "exhaustive search visited more than {SEARCH_BUDGET} representations"
                )));
            }
            let m = Module::from_representation(self.a.clone(), self.dims, &self.chosen)?;
            if let Some(d) = proj_dim(&m, self.cutoff).exact() {
                if self.best.as_ref().map_or(true, |b| d > b.0) {
                    *self.best = Some((d, format!("representation with dimension vector {:?}", self.dims)));
                }
            }
            return Ok(());
        }
        let arrow = &q.arrows()[k];
        let (rows, cols) = (self.dims[arrow.target], self.dims[arrow.source]);
        let entries = rows * cols;
        let p = self.elements.len();
        let total = p.checked_pow(entries as u32).unwrap_or(usize::MAX);
        if total > SEARCH_BUDGET {
            return Err(Error::Budget(format!(
                "{total} candidate matrices for arrow {}",
                arrow.label
            )));
        }
        for code in 0..total {
            let mut m = Matrix::zeros(rows, cols);
            let mut c = code;
            for idx in 0..entries {
                m.set(idx / cols.max(1), idx % cols.max(1), self.elements[c % p].clone());
                c /= p;
            }
            self.chosen.push(m);
            // prune on relations whose arrows are all chosen
            if self.relations_vanish() {
                self.run()?;
            }
            self.chosen.pop();
        }
        Ok(())
    }

    fn relations_vanish(&self) -> bool {
        let mono = self.a.monomial().expect("checked monomial");
        let q = &mono.presentation.quiver;
        let k = self.chosen.len();
        mono.presentation
            .relations
            .iter()
            .filter(|r| r.iter().all(|&x| x < k) && r.contains(&(k - 1)))
            .all(|r| {
                let mut prod = Matrix::identity(self.dims[q.arrows()[r[0]].source]);
                for &x in r {
                    prod = self.chosen[x].mul(&prod);
                }
                prod.is_zero()
            })
    }
}
