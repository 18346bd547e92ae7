//! Exact dense linear algebra over the rationals and prime fields.

mod field;
mod matrix;

pub use field::{is_prime, Field, FieldSpec, Fp};
pub use matrix::{Matrix, Rref};
