//! Exact decision procedures for difference-equation subgroups of tori.

pub mod arith;
pub mod babbitt;
pub mod cyclotomic;
pub mod difference;
pub mod error;
pub mod euclid;
pub mod factor;
pub mod ffactor;
pub mod field;
pub mod hahn;
pub mod intpoly;
pub mod laurent;
pub mod matrix;
pub mod obstruction;
pub mod poly;
pub mod realalg;
pub mod recurrence;
pub mod roots;
pub mod torsion;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use intpoly::IntPoly;
pub use laurent::LaurentPoly;
pub use matrix::Matrix;

pub type IntLaurent = LaurentPoly<BigInt>;
pub type RatLaurent = LaurentPoly<BigRational>;
/// Square matrix of integer Laurent polynomials presenting `Ker(F)`.
pub type DiffMatrix = Matrix<IntLaurent>;
pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;
