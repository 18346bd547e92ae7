//! Minimal projective resolutions, dimension verdicts and Tor/Ext dimensions.

mod resolution;
mod verdict;


pub use crate::ideals::{ext_comparison, ExtComparison};
pub use resolution::*;
pub use verdict::*;

use crate::algebra::{same_algebra, Sparse};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::modules::{dual, Module};

/// Default resolution cutoff.
pub const DEFAULT_CUTOFF: usize = 12;

/// Largest cutoff accepted from user input.
pub const MAX_CUTOFF: usize = 64;

pub fn proj_dim<F: Field>(m: &Module<F>, cutoff: usize) -> DimVerdict {
    minimal_resolution(m, cutoff).verdict()
}

/// Injective dimension of `m`, computed as the projective dimension of
/// `D(m)` over the opposite algebra.
pub fn inj_dim<F: Field>(m: &Module<F>, cutoff: usize) -> DimVerdict {
    proj_dim(&dual(m), cutoff)
}

/// `dim Tor_n^A(x, y)` for `x` over `A^op` and `y` over `A`.
pub fn tor_dim<F: Field>(x: &Module<F>, y: &Module<F>, n: usize) -> Result<usize> {
    let res = minimal_resolution(y, n + 1);
    Ok(tor_dims(x, &res)?.get(n).copied().unwrap_or(0))
}

/// `dim Tor_n(x, y)` for every `n` the resolution of `y` determines: all
/// `n <= cutoff - 1`, or every degree up to its length when it terminated.
pub fn tor_dims<F: Field>(x: &Module<F>, res: &Resolution<F>) -> Result<Vec<usize>> {
    let alg = res.target.algebra();
    if !same_algebra(x.algebra(), &alg.opposite_ref()) {
        return Err(Error::AlgebraMismatch(
            "Tor needs a right module (over the opposite algebra) in the first argument".into(),
        ));
    }
    let dims: Vec<usize> = res
        .steps
        .iter()
        .map(|s| s.generators.iter().map(|&v| x.coords_at(v).len()).sum())
        .collect();
    let ranks: Vec<usize> = (0..res.steps.len())
        .map(|i| if i == 0 { 0 } else { tensor_differential(x, res, i).rank() })
        .collect();
    let len = dims.len();
    let top = if res.terminated { len } else { len.saturating_sub(1) };
    // Tor_n = ker(X ⊗ d_n) / im(X ⊗ d_{n+1})
    Ok((0..top)
        .map(|n| {
            let next = if n + 1 < len { ranks[n + 1] } else { 0 };
            dims[n] - ranks[n] - next
        })
        .collect())
}

/// Matrix of `X ⊗ d_i : X ⊗ P_i -> X ⊗ P_{i-1}` in the identification
/// `X ⊗_A A e_v = X e_v`.
fn tensor_differential<F: Field>(x: &Module<F>, res: &Resolution<F>, i: usize) -> Matrix<F> {
    let src_gens = &res.steps[i].generators;
    let src_blocks: Vec<Vec<usize>> = src_gens.iter().map(|&v| x.coords_at(v)).collect();
    let src_dim: usize = src_blocks.iter().map(Vec::len).sum();
    let tgt_gens = &res.steps[i - 1].generators;
    let tgt_blocks: Vec<Vec<usize>> = tgt_gens.iter().map(|&v| x.coords_at(v)).collect();
    let tgt_dim: usize = tgt_blocks.iter().map(Vec::len).sum();
    let mut out = Matrix::zeros(tgt_dim, src_dim);
    let mut col0 = 0;
    for (k, _) in src_gens.iter().enumerate() {
        let mut row0 = 0;
        for (l, _) in tgt_gens.iter().enumerate() {
            let r = res.differential_component(i, k, l);
            if !r.is_empty() {
                let act = x.act_sparse(&r);
                for (ii, &xi) in tgt_blocks[l].iter().enumerate() {
                    for (jj, &xj) in src_blocks[k].iter().enumerate() {
                        let c = act.get(xi, xj);
                        if !c.is_zero() {
                            out.set(row0 + ii, col0 + jj, c.clone());
                        }
                    }
                }
            }
            row0 += tgt_blocks[l].len();
        }
        col0 += src_blocks[k].len();
    }
    out
}

/// `dim Ext^n_A(x, y)`.
pub fn ext_dim<F: Field>(x: &Module<F>, y: &Module<F>, n: usize) -> Result<usize> {
    let res = minimal_resolution(x, n + 1);
    Ok(ext_dims(&res, y)?.get(n).copied().unwrap_or(0))
}

/// `dim Ext^n(x, y)` for every degree the resolution of `x` determines.
pub fn ext_dims<F: Field>(res: &Resolution<F>, y: &Module<F>) -> Result<Vec<usize>> {
    res.target.check_same_algebra(y)?;
    let len = res.steps.len();
    let dims: Vec<usize> = res
        .steps
        .iter()
        .map(|s| s.generators.iter().map(|&v| y.coords_at(v).len()).sum())
        .collect();
    // delta_i : Hom(P_{i-1}, Y) -> Hom(P_i, Y), for i >= 1
    let ranks: Vec<usize> = (0..len)
        .map(|i| if i == 0 { 0 } else { hom_differential(y, res, i).rank() })
        .collect();
    let top = if res.terminated { len } else { len.saturating_sub(1) };
    Ok((0..top)
        .map(|n| {
            let next = if n + 1 < len { ranks[n + 1] } else { 0 };
            dims[n] - next - ranks[n]
        })
        .collect())
}

fn hom_differential<F: Field>(y: &Module<F>, res: &Resolution<F>, i: usize) -> Matrix<F> {
    let src_gens = &res.steps[i - 1].generators;
    let tgt_gens = &res.steps[i].generators;
    let src_blocks: Vec<Vec<usize>> = src_gens.iter().map(|&v| y.coords_at(v)).collect();
    let tgt_blocks: Vec<Vec<usize>> = tgt_gens.iter().map(|&v| y.coords_at(v)).collect();
    let src_dim: usize = src_blocks.iter().map(Vec::len).sum();
    let tgt_dim: usize = tgt_blocks.iter().map(Vec::len).sum();
    let mut out = Matrix::zeros(tgt_dim, src_dim);
    let mut row0 = 0;
    for (k, _) in tgt_gens.iter().enumerate() {
        let mut col0 = 0;
        for (l, _) in src_gens.iter().enumerate() {
            let r: Sparse<F> = res.differential_component(i, k, l);
            if !r.is_empty() {
                let act = y.act_sparse(&r);
                for (ii, &yi) in tgt_blocks[k].iter().enumerate() {
                    for (jj, &yj) in src_blocks[l].iter().enumerate() {
                        let c = act.get(yi, yj);
                        if !c.is_zero() {
                            out.set(row0 + ii, col0 + jj, c.clone());
                        }
                    }
                }
            }
            col0 += src_blocks[l].len();
        }
        row0 += tgt_blocks[k].len();
    }
    out
}
