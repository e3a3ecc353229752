//! Weight modules over the algebra of quantum differential operators.
//!
//! The algebra `D` is generated over `R = K[tau, sigma, sigma^-1]` by `X`, `Y`
//! and `Y1`. This crate builds weight modules over `D` and over its two
//! generalized Weyl subalgebras, checks the defining relations exactly,
//! analyzes module structure and solves the extension problem from a
//! subalgebra to `D`.

pub mod analyze;
pub mod basering;
pub mod coeffs;
pub mod error;
pub mod extend;
pub mod families;
pub mod json;
pub mod linalg;
pub mod orbits;
pub mod poly;
pub mod suite;
pub mod verify;
pub mod wmod;

pub use coeffs::{Elem, FieldCtx, FieldSpec};
pub use error::{Error, Result};
