//! Symmetric sequence spaces, the dilation and shift operators acting on them,
//! Boyd and fundamental indices, and approximate-eigenvector witnesses for the
//! doubling operator `D = τ_1 σ_2`.

pub mod acceptance;
pub mod cli;
pub mod descriptor;
pub mod error;
pub mod indices;
pub mod lattices;
pub mod operators;
pub mod sampling;
pub mod scalar;
pub mod seq;
pub mod spaces;
pub mod spectral;

pub use error::{Error, Result};
pub use seq::Seq;
