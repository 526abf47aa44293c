//! Tsallis-entropy uncertainty and certainty relations for successive
//! projective measurements, with brute-force verification tooling.

pub mod bounds;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod qubit;
pub mod qudit;
pub mod scenario;
pub mod verify;

pub use entropy::{alpha_log, eta, renyi_from_tsallis, tsallis, EntropyOrder, ProbabilityDistribution, Regime};
pub use error::{Error, Result};
pub use qubit::{BlochVector, QubitObservable, QubitState};
pub use qudit::{ComplexMatrix, QuditObservable, QuditState};
