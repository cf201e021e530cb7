//! Exact tropical linear algebra on the tropical projective plane.
//!
//! Max-plus scalars over arbitrary precision rationals, points and lines of
//! `TP²`, 3×3 matrices and their normal forms, tropical triangles, the cell
//! decomposition cut out by three tropical lines, and the piecewise linear
//! maps `p ↦ A ⊙ p`.

pub mod arrangement;
pub mod error;
pub mod mapping;
pub mod matrix3;
pub mod normalform;
pub mod projective;
pub mod semiring;
pub mod triangle;
pub mod verify;

pub use error::{Error, Result};
pub use matrix3::{MonomialMatrix, TropDet, TropMatrix3};
pub use projective::{AffinePoint, ProjPoint, TropLine};
pub use semiring::{DualScalar, Rational, TropScalar};
