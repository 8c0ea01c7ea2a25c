//! Quantum geometric tensors for parametrized pure states and full-rank
//! mixed states.
//!
//! The crate computes the mixed-state QGT built from gauge-minimized
//! distances between spectral decompositions, its Fisher-Rao /
//! Fubini-Study / curvature split, the Bures metric, finite distances,
//! parallel transport and Berry phases, and numerical witnesses of the
//! metric-curvature inequalities.

pub mod derivatives;
pub mod distances;
pub mod error;
pub mod inequalities;
pub mod models;
pub mod spectral;
pub mod tensors;
pub mod transport;

pub use error::{QgtError, Result};
pub use models::{HamiltonianFamily, StateFamily};
pub use spectral::{CMatrix, CVector, DensityMatrix, SpectralDecomposition};
