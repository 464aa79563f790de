//! Two-point truncated correlation statistics for partially distinguishable
//! photons transmitted through an `m`-mode linear optical network.
//!
//! The crate evaluates the set of output-mode covariances `C_ij` (the
//! "C-dataset") for a given circuit and input state, compares its lowest
//! moments with closed-form random-matrix and Fourier-circuit predictions,
//! and scans a probe photon's delay to locate the injection times of the
//! other photons.
//!
//! Mode and photon indices are zero-based throughout.
//!
//! Monte-Carlo sweeps run on rayon when the `parallel` feature is enabled
//! (the default). Every random draw comes from a seeded ChaCha substream
//! keyed by the trial index, so results do not depend on the thread count.

// NaN-rejecting comparisons are written as negated orderings.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod error;
pub mod exec;
pub mod fourier;
pub mod input;
pub mod oracle;
pub mod overlap;
pub mod rmt;
pub mod spectroscopy;
pub mod stats;
pub mod unitary;

pub use correlation::{c_dataset, hom_scan, truncated_correlation, CircuitMode, HomScanConfig, SweepResult};
pub use error::{Error, Result};
pub use exec::Execution;
pub use input::{InputSpec, Photon, WavePacket};
pub use overlap::{build_overlap_matrix, gaussian_overlap, OverlapMatrix};
pub use stats::{coefficient_of_variation, dataset_moments, normalised_mean, CDataset, Estimate, Moments};
pub use unitary::{fourier_matrix, sample_haar, unitarity_defect, UnitaryMatrix};

/// Absolute tolerance for positive-semidefiniteness and variance checks.
pub const PSD_TOLERANCE: f64 = 1e-10;
