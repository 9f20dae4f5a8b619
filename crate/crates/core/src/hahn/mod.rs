//! Generalized power series over finite-rank real exponent groups.
pub mod artin_schreier;
pub mod group;
pub mod json;
pub mod newton;
pub mod series;
pub mod sigma;

pub use artin_schreier::{artin_schreier_reduce, ASCertificate, Outcome};
pub use group::{Exponent, ExponentGroup, Weight};
pub use newton::{newton_lift, newton_lift_traced, NewtonTrace};
pub use series::HahnSeries;
pub use sigma::sigma_action;

/// Series with rational coefficients.
pub type QSeries = HahnSeries<crate::field::Rationals>;
/// Series over a finite field `F_{p^k}`.
pub type GfSeries = HahnSeries<crate::field::GaloisField>;
