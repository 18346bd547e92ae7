//! Small algebras used throughout the tests, the acceptance suite and the CLI.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraRef, Arrow, MonomialPresentation, Quiver};
use crate::exactlin::Field;

/// Monomial presentation over `F` from vertex labels, `(label, source, target)`
/// arrows (vertex indices) and relations written as arrow-label words.
pub fn presentation<F: Field>(
    vertices: &[&str],
    arrows: &[(&str, usize, usize)],
    relations: &[&[&str]],
) -> MonomialPresentation {
    let quiver = Quiver::new(
        vertices.iter().map(|v| v.to_string()).collect(),
        arrows
            .iter()
            .map(|&(label, source, target)| Arrow {
                label: label.to_string(),
                source,
                target,
            })
            .collect(),
    )
    .expect("fixture quiver");
    let relations = relations
        .iter()
        .map(|r| r.iter().map(|l| quiver.arrow_index(l).expect("fixture arrow")).collect())
        .collect();
    MonomialPresentation::new(quiver, relations, F::spec()).expect("fixture presentation")
}

fn build<F: Field>(p: &MonomialPresentation) -> AlgebraRef<F> {
    Arc::new(Algebra::from_monomial(p).expect("fixture algebra"))
}

/// Two vertices, `a: 1 -> 2`, `b: 2 -> 1`, with the relation `b a b`.
/// `P_1` is uniserial `1/2/1/2` and `P_2` is uniserial `2/1/2`.
pub fn r32_presentation<F: Field>() -> MonomialPresentation {
    presentation::<F>(&["1", "2"], &[("a", 0, 1), ("b", 1, 0)], &[&["b", "a", "b"]])
}

pub fn r32<F: Field>() -> AlgebraRef<F> {
    build(&r32_presentation::<F>())
}

/// Linear quiver `a: 1 -> 2`.
pub fn a2_presentation<F: Field>() -> MonomialPresentation {
    presentation::<F>(&["1", "2"], &[("a", 0, 1)], &[])
}

pub fn a2<F: Field>() -> AlgebraRef<F> {
    build(&a2_presentation::<F>())
}

/// The ground field as a one-vertex algebra.
pub fn field_algebra<F: Field>() -> AlgebraRef<F> {
    build(&presentation::<F>(&["1"], &[], &[]))
}

/// `k[x]/(x^2)`.
pub fn dual_numbers<F: Field>() -> AlgebraRef<F> {
    build(&presentation::<F>(&["1"], &[("x", 0, 0)], &[&["x", "x"]]))
}
