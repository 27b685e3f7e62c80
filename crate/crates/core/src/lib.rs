//! Quantum-correlation measures for bipartite `m ⊗ n` density matrices.
//!
//! The crate computes the closed-form discord measure `D_P` (the sum of the
//! `m(m-1)` smallest eigenvalues of the Gram matrix of the left-correlation
//! matrix), the geometric discord `D_G` (exact for `m = 2`, a numerically
//! optimized upper bound otherwise), the criterion-tensor measure `Q`, and a
//! rank-based zero-discord test.
//!
//! All measures are taken with respect to measurements on the first tensor
//! factor (party A).

pub mod acceptance;
pub mod bloch;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod operator_basis;
pub mod state_zoo;
pub mod tolerances;

pub use bloch::{BlochDecomposition, DensityMatrix};
pub use error::{DiscordError, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use measures::{MeasureReport, MeasurementBasis, OptimizerConfig};
pub use operator_basis::GeneratorBasis;
