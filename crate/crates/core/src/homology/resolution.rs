use serde::Serialize;

use crate::algebra::Sparse;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::modules::{projective_coords, syzygy_with_cover, top, Module};

use super::{DimVerdict, PeriodCert};

/// One degree of a minimal projective resolution.
#[derive(Clone, Debug)]
pub struct Step<F> {
    /// Vertex of each indecomposable summand of `P_i`, sorted.
    pub generators: Vec<usize>,
    pub projective: Module<F>,
    /// `(copy, algebra basis index)` of each basis vector of `P_i`.
    pub coords: Vec<(usize, usize)>,
    /// `d_i : P_i -> P_{i-1}`; for `i = 0` the augmentation `P_0 -> M`.
    pub differential: Matrix<F>,
    /// `Ω^{i+1} = ker(P_i -> Ω^i)`.
    pub syzygy: Module<F>,
    /// Inclusion `Ω^{i+1} -> P_i`.
    pub kernel_incl: Matrix<F>,
}

#[derive(Clone, Debug)]
pub struct Resolution<F> {
    pub target: Module<F>,
    pub steps: Vec<Step<F>>,
    pub cutoff: usize,
    /// Some syzygy within the cutoff vanished; `steps` is then the whole
    /// minimal resolution.
    pub terminated: bool,
}

/// Minimal projective resolution of `m` computed through degree `cutoff`.
pub fn minimal_resolution<F: Field>(m: &Module<F>, cutoff: usize) -> Resolution<F> {
    let alg = m.algebra();
    let mut steps: Vec<Step<F>> = Vec::new();
    let mut cur = m.clone();
    let mut terminated = cur.is_zero();
    if !terminated {
        for _ in 0..=cutoff {
            let (cover, omega, incl) = syzygy_with_cover(&cur);
            let differential = match steps.last() {
                None => cover.epi.matrix.clone(),
                Some(prev) => prev.kernel_incl.mul(&cover.epi.matrix),
            };
            let (_, coords) = projective_coords(alg, &cover.generators);
            steps.push(Step {
                generators: cover.generators,
                projective: cover.projective,
                coords,
                differential,
                syzygy: omega.clone(),
                kernel_incl: incl.matrix,
            });
            if omega.is_zero() {
                terminated = true;
                break;
            }
            cur = omega;
        }
    }
    Resolution {
        target: m.clone(),
        steps,
        cutoff,
        terminated,
    }
}

impl<F: Field> Resolution<F> {
    pub fn verdict(&self) -> DimVerdict {
        if self.terminated {
            DimVerdict::exactly(self.steps.len().saturating_sub(1))
        } else {
            DimVerdict::at_least(self.cutoff + 1, detect_periodicity(self))
        }
    }

    /// `Ω^i` for `0 <= i <= steps.len()`.
    pub fn syzygy(&self, i: usize) -> &Module<F> {
        if i == 0 {
            &self.target
        } else {
            &self.steps[i - 1].syzygy
        }
    }

    /// Multiplicity of each `P_v` in each degree.
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        let nv = self.target.algebra().num_vertices();
        self.steps
            .iter()
            .map(|s| {
                let mut m = vec![0; nv];
                for &v in &s.generators {
                    m[v] += 1;
                }
                m
            })
            .collect()
    }

    /// Component `r ∈ e_u A e_w` of `d_i` sending generator `k` of `P_i` into
    /// summand `l` of `P_{i-1}`, as a sparse algebra element. Requires `i >= 1`.
    pub fn differential_component(&self, i: usize, k: usize, l: usize) -> Sparse<F> {
        let src = &self.steps[i];
        let tgt = &self.steps[i - 1];
        let alg = self.target.algebra();
        let u = src.generators[k];
        let col = src
            .coords
            .iter()
            .position(|&(c, b)| c == k && b == alg.idempotent(u))
            .expect("generator coordinate");
        tgt.coords
            .iter()
            .enumerate()
            .filter(|(_, &(c, _))| c == l)
            .filter_map(|(row, &(_, b))| {
                let x = src.differential.get(row, col);
                (!x.is_zero()).then(|| (b, x.clone()))
            })
            .collect()
    }

    /// Rechecks the structural invariants: every `d_i` is a homomorphism,
    /// consecutive differentials compose to zero, ranks match the kernel
    /// dimensions (exactness), and the differentials land in the radical
    /// (minimality).
    pub fn verify(&self) -> Result<()> {
        let alg = self.target.algebra();
        for (i, s) in self.steps.iter().enumerate() {
            let prev = if i == 0 {
                &self.target
            } else {
                &self.steps[i - 1].projective
            };
            if !Module::intertwines(&s.projective, prev, &s.differential) {
                return Err(Error::Inconsistent(format!("d_{i} is not a module map")));
            }
            if !Module::intertwines(&s.syzygy, &s.projective, &s.kernel_incl) {
                return Err(Error::Inconsistent(format!("kernel inclusion at degree {i} is not a module map")));
            }
            if s.differential.mul(&s.kernel_incl).cols() > 0 && !s.differential.mul(&s.kernel_incl).is_zero() {
                return Err(Error::Inconsistent(format!("kernel at degree {i} is not killed by d_{i}")));
            }
            // exactness: rank d_i + dim ker = dim P_i
            let rank = s.differential.rank();
            if rank + s.syzygy.dim() != s.projective.dim() || s.kernel_incl.rank() != s.syzygy.dim() {
                return Err(Error::Inconsistent(format!("rank bookkeeping fails at degree {i}")));
            }
            if i == 0 {
                if rank != self.target.dim() {
                    return Err(Error::Inconsistent("augmentation is not onto".into()));
                }
            } else {
                let before = &self.steps[i - 1];
                if rank != before.syzygy.dim() {
                    return Err(Error::Inconsistent(format!("image of d_{i} is not the kernel")));
                }
                if !before.differential.mul(&s.differential).is_zero() {
                    return Err(Error::Inconsistent(format!("d_{} d_{i} != 0", i - 1)));
                }
                // minimality: every component is radical
                for k in 0..s.generators.len() {
                    for l in 0..before.generators.len() {
                        let r = self.differential_component(i, k, l);
                        if r.iter().any(|(b, _)| !alg.is_radical(*b)) {
                            return Err(Error::Inconsistent(format!("d_{i} is not minimal")));
                        }
                    }
                }
            }
            // the cover is minimal: its top matches the top of the module it covers
            let covered = self.syzygy(i);
            let mut t = vec![0; alg.num_vertices()];
            for &v in &s.generators {
                t[v] += 1;
            }
            if top(covered) != t {
                return Err(Error::Inconsistent(format!("P_{i} is not a projective cover")));
            }
        }
        if self.terminated != self.steps.last().map_or(true, |s| s.syzygy.is_zero()) {
            return Err(Error::Inconsistent("termination flag disagrees with the last syzygy".into()));
        }
        Ok(())
    }

    pub fn report(&self) -> ResolutionReport {
        ResolutionReport {
            cutoff: self.cutoff,
            multiplicities: self.multiplicities(),
            terminated: self.terminated,
            verdict: self.verdict(),
        }
    }
}

/// Serializable summary of a resolution.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub cutoff: usize,
    pub multiplicities: Vec<Vec<usize>>,
    pub terminated: bool,
    pub verdict: DimVerdict,
}

/// Earliest lag, then smallest period, at which the signatures (dimension
/// vector and top) of the computed syzygies repeat. Terminated resolutions
/// have none.
pub fn detect_periodicity<F: Field>(r: &Resolution<F>) -> Option<PeriodCert> {
    if r.terminated {
        return None;
    }
    let sigs: Vec<(Vec<usize>, Vec<usize>)> = (0..=r.steps.len())
        .map(|i| {
            let m = r.syzygy(i);
            (m.dim_vector(), top(m))
        })
        .collect();
    let n = sigs.len();
    for lag in 0..n {
        for period in 1..n {
            if lag + 2 * period > n {
                break;
            }
            if (0..period).all(|i| sigs[lag + i] == sigs[lag + period + i]) {
                return Some(PeriodCert { lag, period });
            }
        }
    }
    None
}
