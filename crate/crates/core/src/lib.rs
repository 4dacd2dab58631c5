//! Exact computations with supercommutative algebras, Lie superalgebras,
//! quadratic spaces of supersymmetry type, spinors, the super Brauer group,
//! Picard data of super-graded categories and theta-term functionals.
//!
//! All arithmetic is over the rationals (with Q(i) where a splitting needs
//! it). Nothing here uses floating point.

pub mod catalog;
pub mod error;
pub mod field;
pub mod graded;
pub mod lie_super;
pub mod linalg;
pub mod picard;
pub mod quadratic;
pub mod scalar;
pub mod spinor;
pub mod superpoly;
pub mod theta;
pub mod wall_brauer;

pub use error::{Error, Result};
pub use field::{Field, GaussRational};
pub use graded::{koszul_sign, reorder_sign, superdim_tensor, GradedPermutation, Parity, Sign, SuperDimension};
pub use scalar::Scalar;
