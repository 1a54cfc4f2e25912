//! s-numbers, entropy numbers and widths of finite-dimensional operators
//! between `ℓ_p^n` spaces, `0 < p ≤ ∞`.

pub mod entropy;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod sampling;
pub mod spaces;
pub mod spectral;
pub mod widths;

pub use error::{Error, Result};
pub use operators::LinOp;
pub use spaces::{Exponent, Field, SpaceSpec};
