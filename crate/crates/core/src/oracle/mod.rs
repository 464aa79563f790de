//! Independent verification engines.
//!
//! * [`fock`] builds the transmitted many-photon state in the occupation
//!   basis and evaluates `C_ij` from number operators, without using the
//!   closed-form correlator.
//! * [`montecarlo`] estimates Haar moments of matrix-entry monomials and
//!   arrival-time averages by direct sampling.

pub mod fock;
pub mod gram;
pub mod montecarlo;

pub use fock::{fock_correlation, fock_correlation_from_vectors, fock_total_number_variance, propagate, FockState};
pub use gram::GramMatrix;
pub use montecarlo::{
    mc_haar_moment, mc_time_average, ComplexEstimate, HaarMonomial, OverlapTerm, TimeAverageConfig, TimeStatistic,
};
