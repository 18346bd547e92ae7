//! Quivers, paths and monomial presentations.
//!
//! A path is written as an arrow word `a1 a2 ... an` with `a1` traversed
//! first, so `target(a_i) = source(a_{i+1})`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate vertex `{v}`")));
            }
        }
        let mut seen = HashSet::new();
        for a in &arrows {
            if !seen.insert(a.label.as_str()) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate arrow `{}`",
                    a.label
                )));
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::InvalidPresentation(format!(
                    "arrow `{}` has an endpoint out of range",
                    a.label
                )));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    /// Same vertices, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    label: a.label.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Full subquiver on the vertices in `keep`, with vertices renumbered in
    /// order. Returns the subquiver and the old arrow index of each new arrow.
    pub fn full_subquiver(&self, keep: &[usize]) -> (Quiver, Vec<usize>) {
        let new_index: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut arrows = Vec::new();
        let mut old = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if let (Some(&s), Some(&t)) = (new_index.get(&a.source), new_index.get(&a.target)) {
                arrows.push(Arrow {
                    label: a.label.clone(),
                    source: s,
                    target: t,
                });
                old.push(i);
            }
        }
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        (Quiver { vertices, arrows }, old)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            start: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn end(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| q.arrows[a].target)
    }

    /// Vertices visited, in order, including both endpoints.
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        let mut out = vec![self.start];
        out.extend(self.arrows.iter().map(|&a| q.arrows[a].target));
        out
    }

    /// Ordering used for bases: length, then arrow indices, then start vertex.
    fn sort_key(&self) -> (usize, &[usize], usize) {
        (self.arrows.len(), &self.arrows, self.start)
    }

    pub fn contains_word(&self, word: &[usize]) -> bool {
        !word.is_empty()
            && word.len() <= self.arrows.len()
            && self.arrows.windows(word.len()).any(|w| w == word)
    }

    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", q.vertices[self.start]);
        }
        let labels: Vec<&str> = self.arrows.iter().map(|&a| q.arrows[a].label.as_str()).collect();
        if labels.iter().all(|l| l.chars().count() == 1) {
            labels.concat()
        } else {
            labels.join("*")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialPresentation {
    pub quiver: Quiver,
    /// Arrow words, first arrow leftmost.
    pub relations: Vec<Vec<usize>>,
    pub field: FieldSpec,
}

/// Upper bound on the number of nonzero paths before we give up.
pub const PATH_BUDGET: usize = 20_000;

impl MonomialPresentation {
    pub fn new(quiver: Quiver, relations: Vec<Vec<usize>>, field: FieldSpec) -> Result<Self> {
        for r in &relations {
            if r.len() < 2 {
                return Err(Error::InvalidPresentation(format!(
                    "relation {} has length < 2",
                    word_label(&quiver, r)
                )));
            }
            if r.iter().any(|&a| a >= quiver.arrows.len()) {
                return Err(Error::InvalidPresentation("relation uses unknown arrow".into()));
            }
            for w in r.windows(2) {
                if quiver.arrows[w[0]].target != quiver.arrows[w[1]].source {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {} is not composable",
                        word_label(&quiver, r)
                    )));
                }
            }
        }
        for (i, r) in relations.iter().enumerate() {
            for (j, s) in relations.iter().enumerate() {
                if i != j && s.len() <= r.len() && r.windows(s.len()).any(|w| w == s.as_slice()) {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {} contains relation {}",
                        word_label(&quiver, r),
                        word_label(&quiver, s)
                    )));
                }
            }
        }
        Ok(MonomialPresentation {
            quiver,
            relations,
            field,
        })
    }

    fn max_relation_len(&self) -> usize {
        self.relations.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn is_relation_free(&self, p: &Path) -> bool {
        self.relations.iter().all(|r| !p.contains_word(r))
    }

    /// All relation-free paths, sorted by length then arrow indices.
    ///
    /// A relation-free path on which the window state (end vertex plus the
    /// last `max_rel - 1` arrows) repeats can be pumped forever, so it
    /// witnesses non-admissibility.
    pub fn path_basis(&self) -> Result<Vec<Path>> {
        let q = &self.quiver;
        let w = self.max_relation_len().saturating_sub(1);
        let mut out: Vec<Path> = (0..q.vertices.len()).map(Path::trivial).collect();
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                let end = p.end(q);
                for (ai, a) in q.arrows.iter().enumerate() {
                    if a.source != end {
                        continue;
                    }
                    let mut np = p.clone();
                    np.arrows.push(ai);
                    // only suffixes can newly contain a relation
                    if self
                        .relations
                        .iter()
                        .any(|r| r.len() <= np.arrows.len() && np.arrows.ends_with(r))
                    {
                        continue;
                    }
                    if let Some(cycle) = pumpable_cycle(q, &np, w) {
                        return Err(Error::NotAdmissible(word_label(q, &cycle)));
                    }
                    next.push(np);
                }
            }
            out.extend(next.iter().cloned());
            if out.len() > PATH_BUDGET {
                return Err(Error::Budget(format!(
                    "more than {PATH_BUDGET} nonzero paths"
                )));
            }
            frontier = next;
        }
        debug_assert!(out.iter().all(|p| self.is_relation_free(p)));
        out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Ok(out)
    }

    /// Presentation of the opposite algebra: reversed arrows and words.
    pub fn opposite(&self) -> MonomialPresentation {
        MonomialPresentation {
            quiver: self.quiver.opposite(),
            relations: self
                .relations
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
            field: self.field,
        }
    }

    /// Presentation of `A/AeA`: full subquiver on the vertices outside `removed`
    /// with the relations that avoid the removed vertices.
    pub fn quotient_by_vertices(&self, removed: &[usize]) -> (MonomialPresentation, Vec<usize>, Vec<usize>) {
        let keep: Vec<usize> = (0..self.quiver.vertices.len())
            .filter(|v| !removed.contains(v))
            .collect();
        let (sub, old_arrows) = self.quiver.full_subquiver(&keep);
        let new_arrow: HashMap<usize, usize> =
            old_arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let relations = self
            .relations
            .iter()
            .filter_map(|r| r.iter().map(|a| new_arrow.get(a).copied()).collect())
            .collect();
        (
            MonomialPresentation {
                quiver: sub,
                relations,
                field: self.field,
            },
            keep,
            old_arrows,
        )
    }
}

fn pumpable_cycle(q: &Quiver, p: &Path, w: usize) -> Option<Vec<usize>> {
    let n = p.arrows.len();
    if n < w + 1 {
        return None;
    }
    let verts = p.vertices(q);
    let state = |j: usize| (verts[j], &p.arrows[j - w..j]);
    let last = state(n);
    (w..n)
        .find(|&j| state(j) == last)
        .map(|j| p.arrows[j..n].to_vec())
}

pub fn word_label(q: &Quiver, word: &[usize]) -> String {
    let labels: Vec<&str> = word.iter().map(|&a| q.arrows[a].label.as_str()).collect();
    labels.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver(vs: &[&str], arrows: &[(&str, usize, usize)]) -> Quiver {
        Quiver::new(
            vs.iter().map(|s| s.to_string()).collect(),
            arrows
                .iter()
                .map(|&(l, s, t)| Arrow {
                    label: l.into(),
                    source: s,
                    target: t,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_vertex() {
        let p = MonomialPresentation::new(quiver(&["1"], &[]), vec![], FieldSpec::Rationals).unwrap();
        assert_eq!(p.path_basis().unwrap().len(), 1);
    }

    #[test]
    fn r32_paths() {
        let q = quiver(&["1", "2"], &[("a", 0, 1), ("b", 1, 0)]);
        let p = MonomialPresentation::new(q.clone(), vec![vec![1, 0, 1]], FieldSpec::Rationals).unwrap();
        let labels: Vec<String> = p.path_basis().unwrap().iter().map(|p| p.label(&q)).collect();
        assert_eq!(labels, ["e1", "e2", "a", "b", "ab", "ba", "aba"]);
    }

    #[test]
    fn a2_paths() {
        let q = quiver(&["1", "2"], &[("a", 0, 1)]);
        let p = MonomialPresentation::new(q, vec![], FieldSpec::Rationals).unwrap();
        assert_eq!(p.path_basis().unwrap().len(), 3);
    }

    #[test]
    fn loop_without_relation_is_rejected() {
        let q = quiver(&["1"], &[("x", 0, 0)]);
        let p = MonomialPresentation::new(q, vec![], FieldSpec::Rationals).unwrap();
        assert!(matches!(p.path_basis(), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn cycle_avoiding_relations_is_rejected() {
        // x^2 = y^2 = 0 leaves the words (xy)^n nonzero
        let q = quiver(&["1"], &[("x", 0, 0), ("y", 0, 0)]);
        let p = MonomialPresentation::new(q, vec![vec![0, 0], vec![1, 1]], FieldSpec::Rationals).unwrap();
        let err = p.path_basis().unwrap_err();
        assert!(matches!(err, Error::NotAdmissible(_)), "{err}");
        let q = quiver(&["1"], &[("x", 0, 0)]);
        let p = MonomialPresentation::new(q, vec![vec![0, 0, 0]], FieldSpec::Rationals).unwrap();
        assert_eq!(p.path_basis().unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_relations() {
        let q = quiver(&["1", "2"], &[("a", 0, 1), ("b", 1, 0)]);
        assert!(MonomialPresentation::new(q.clone(), vec![vec![0, 0]], FieldSpec::Rationals).is_err());
        assert!(MonomialPresentation::new(q.clone(), vec![vec![0]], FieldSpec::Rationals).is_err());
        assert!(MonomialPresentation::new(
            q,
            vec![vec![0, 1], vec![0, 1, 0]],
            FieldSpec::Rationals
        )
        .is_err());
    }
}
