//! Chatterjee's rank correlation and its relatives, computed through copula
//! Markov products.
//!
//! * [`copula`]: bivariate copulas, `∂₁`-partials, (generalized) Markov
//!   products, checkerboard approximations and distances.
//! * [`measures`]: population values of ξ, the multi-output extension T and
//!   the explainability measure Λ.
//! * [`models`]: elliptical and ℓ1-norm symmetric families, samplers and
//!   conditional laws.
//! * [`estimators`]: rank and nearest-neighbour sample estimators.

pub mod copula;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod measures;
pub mod models;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
