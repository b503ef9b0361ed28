//! Curves over the ring of dual numbers in the affine plane `D²` and the
//! Lorentz-Minkowski plane `D²₁`.

pub mod curve;
pub mod document;
pub mod equiaffine;
pub mod dual;
pub mod error;
pub mod expr;
pub mod lorentz;
pub mod verify;

pub use error::{Error, Result};
