//! Canonical metric connections on Lie-Hermitian manifolds.
//!
//! Structure constants in, curvature tensors out. Indices are 0-based in
//! the API and 1-based in files and command-line output.

pub mod analysis;
pub mod cli;
pub mod connections;
pub mod curvature;
pub mod error;
pub mod exterior;
pub mod lie_hermitian;
pub mod models;
pub mod report;

pub use connections::ConnectionParams;
pub use curvature::{CurvatureKind, CurvatureTensor};
pub use error::{Error, Result};
pub use lie_hermitian::{StructureConstants, TorsionTensor};
