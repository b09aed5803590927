//! Exact computer algebra for Krichever subspaces of two-dimensional local
//! fields, Sato Grassmannian operators, and the deformed KP hierarchy on the
//! two-dimensional local skew field with parameter `a`.
//!
//! Everything is exact: coefficients are rationals or rational functions of
//! one formal parameter, and every truncated series tracks the order up to
//! which it is known.

pub mod bilocal;
pub mod diffalg;
pub mod echelon;
pub mod error;
pub mod field;
pub mod geodata;
pub mod laurent;
pub mod psdo;
pub mod scalar;
pub mod skewkp;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use field::{Field, Q};
pub use scalar::{ParamScalar, QPoly};
