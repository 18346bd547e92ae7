//! Search for a standardly stratifying chain of idempotent ideals.

use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::AlgebraRef;
use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::homology::{proj_dim, DimVerdict};
use crate::ideals::build_context;
use crate::modules::is_projective;

/// Largest vertex count the search accepts.
pub const STRATIFIED_VERTEX_BUDGET: usize = 8;

/// One layer `I_{k+1}/I_k` of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratStep {
    pub vertex: String,
    /// `dim A/I_k`.
    pub quotient_dim: usize,
    /// `dim I_{k+1}/I_k`.
    pub layer_dim: usize,
    pub projective: bool,
    /// Projective dimension of the layer over `A/I_k`; consistent with
    /// `projective` exactly when it is `0` for projective layers.
    pub pd: DimVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratifiedResult {
    /// Vertex labels in chain order, if some ordering works.
    pub chain: Option<Vec<String>>,
    pub steps: Vec<StratStep>,
    /// Prefixes whose next layer was examined.
    pub layers_checked: usize,
}

/// Tries vertex orderings `v_1, ..., v_n`, with `I_k` generated by
/// `e_{v_1} + ... + e_{v_k}`, looking for one where each `I_{k+1}/I_k` is a
/// projective `A/I_k`-module. Orderings are explored depth first in vertex
/// order. The quotient `A/I_k` depends only on the set of vertices used, so
/// a set from which no completion exists is not retried.
pub fn stratified_chain_search<F: Field>(a: &AlgebraRef<F>, cutoff: usize) -> Result<StratifiedResult> {
    let n = a.num_vertices();
    if n > STRATIFIED_VERTEX_BUDGET {
        return Err(Error::Budget(format!(
            "stratified search allows at most {STRATIFIED_VERTEX_BUDGET} vertices, got {n}"
        )));
    }
    let mut search = Search {
        failed: HashSet::new(),
        layers_checked: 0,
        cutoff,
    };
    let labels = a.vertex_labels().to_vec();
    let mut steps = Vec::new();
    let found = search.extend(a, &(0..n).collect::<Vec<_>>(), &labels, &mut steps, 0)?;
    Ok(StratifiedResult {
        chain: found.then(|| steps.iter().map(|s| s.vertex.clone()).collect()),
        steps: if found { steps } else { Vec::new() },
        layers_checked: search.layers_checked,
    })
}

struct Search {
    failed: HashSet<u64>,
    layers_checked: usize,
    cutoff: usize,
}

impl Search {
    /// `q` is `A/I_k` and `remaining[i]` is the original vertex of its vertex `i`.
    fn extend<F: Field>(
        &mut self,
        q: &AlgebraRef<F>,
        remaining: &[usize],
        labels: &[String],
        steps: &mut Vec<StratStep>,
        used: u64,
    ) -> Result<bool> {
        if remaining.is_empty() {
            return Ok(true);
        }
        for (i, &v) in remaining.iter().enumerate() {
            let next = used | (1 << v);
            if self.failed.contains(&next) {
                continue;
            }
            self.layers_checked += 1;
            let ctx = build_context(q, &[i])?;
            let layer = &ctx.aea_left;
            let projective = is_projective(layer);
            let pd = proj_dim(layer, self.cutoff);
            if projective != (pd.exact() == Some(0)) {
                return Err(Error::Inconsistent(format!(
                    "layer at vertex {}: is_projective = {projective} but pd = {pd}",
                    labels[v]
                )));
            }
            if !projective {
                continue;
            }
            steps.push(StratStep {
                vertex: labels[v].clone(),
                quotient_dim: q.dim(),
                layer_dim: layer.dim(),
                projective,
                pd,
            });
            let rest: Vec<usize> = ctx.abar_vertices.iter().map(|&w| remaining[w]).collect();
            if self.extend(&ctx.abar, &rest, labels, steps, next)? {
                return Ok(true);
            }
            steps.pop();
            self.failed.insert(next);
        }
        Ok(false)
    }
}
