//! Regularized eigenvalue measures of group-ring matrices on finite quotients.

pub mod abelian;
pub mod arith;
pub mod error;
pub mod group;
pub mod heisenberg;
pub mod linalg;
pub mod plot;
pub mod quotient;
pub mod ring;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
