//! Desk-scale numerical verification of asymptotic counts of friable values
//! taken by systems of affine-linear forms over convex bodies, together with
//! the computable objects of the underlying argument.

pub mod analytic;
pub mod correlate;
pub mod dickman;
pub mod error;
pub mod forms;
pub mod gowers;
pub mod numeric;
pub mod sieve;

pub use error::{Error, Result};
