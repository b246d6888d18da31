//! Low-rank Tucker approximation of dense tensors.
//!
//! Deterministic pipelines (THOSVD, STHOSVD) and randomized ones (R-STHOSVD,
//! Sketch-STHOSVD, sub-Sketch-STHOSVD) share the dense [`DenseTensor`] type and
//! the kernels in [`linalg`]. [`metrics`] holds error measures and the bound
//! oracles used to check them; [`datagen`] builds the test-tensor families.

pub mod datagen;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod tensor;
pub mod tucker;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use tensor::{kronecker, DenseMatrix, DenseTensor};
pub use tucker::{decompose, Algorithm, ApproxConfig, TuckerModel};
