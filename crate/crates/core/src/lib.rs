//! Homological invariants of finite-dimensional quiver algebras with monomial
//! relations, idempotent ideals `AeA`, and checks of finitistic dimension
//! bounds on concrete algebras.
//!
//! All arithmetic is exact. The numeric core is generic over [`Field`], with
//! [`Q`] (arbitrary-precision rationals) and the prime fields [`Fp`] as the
//! supported scalars.

pub mod algebra;
pub mod error;
pub mod exactlin;
pub mod fixtures;
pub mod homology;
pub mod ideals;
pub mod modules;
pub mod theorems;

pub use error::{Error, Result};
pub use exactlin::{Field, FieldSpec, Fp, Matrix};

/// Rational numbers in lowest terms.
pub type Q = num_rational::BigRational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
