//! Exact algebra for invariant Hermitian structures on Lie groups and
//! reductive homogeneous spaces.
//!
//! Everything is computed over the rationals: connections are represented by
//! their Nomizu maps, tensors by dense component arrays, and every verdict
//! comes with an explicit witness tensor.

pub mod algebra;
pub mod connections;
pub mod constructions;
pub mod error;
pub mod hermitian;
pub mod homogeneous;
pub mod linalg;
pub mod nomizu;
pub mod poly;
pub mod scalar;
pub mod tensor;
pub mod verdict;

pub use error::{Error, Result};
pub use scalar::Scalar;
