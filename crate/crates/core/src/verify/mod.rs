//! Brute-force verification: fixed-purity sweeps, seeded random fuzzing and
//! pipeline cross-checks. Any violation carries the offending instance so
//! it can be written to a JSON replay file and re-evaluated later.

pub mod fuzz;
pub mod sampling;
pub mod sweep;

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::ComplexMatrix;

pub use fuzz::{
    replay_margin,
    cross_check_pipelines, fuzz_monotonicity, fuzz_prop3, fuzz_scenario1_sandwich, monotonicity_margin, CrossCheckReport,
    FuzzReport, Prop3FuzzConfig, Prop3FuzzReport, SandwichReport,
};
pub use sweep::{sweep, sweep_scenario1, sweep_scenario2, SweepCell, SweepConfig, SweepKind, SweepResult, DEFAULT_R3_POINTS};

/// Margin below which an inequality counts as violated.
pub const VIOLATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// S_α(E(ρ)) ≥ S_α(ρ).
    Monotonicity,
    Scenario1Lower,
    Scenario1Upper,
    Prop3Upper,
    SweepLower,
    SweepUpper,
}

/// Row-major real and imaginary parts of a complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        let (re, im) = ComplexMatrix::new(m.clone()).map(|c| c.to_parts()).unwrap_or_default();
        Self { re, im }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        Ok(ComplexMatrix::from_parts(&self.re, &self.im)?.into_inner())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Instance {
    Qudit { state: MatrixRecord, first_basis: MatrixRecord, second_basis: Option<MatrixRecord> },
    Qubit { bloch: [f64; 3], first_axis: [f64; 3], second_axis: [f64; 3] },
    Sweep { kind: SweepKind, r_norm: f64, mu: f64, r3: f64 },
}

/// One failed inequality check with enough context to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: CheckKind,
    pub seed: u64,
    pub stream: u64,
    pub dim: usize,
    pub alpha: f64,
    pub observed: f64,
    pub bound: f64,
    /// Signed slack of the inequality; negative means violated.
    pub margin: f64,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayFile {
    pub command: String,
    pub violations: Vec<Violation>,
}

pub fn write_replay(path: &Path, command: &str, violations: &[Violation]) -> Result<()> {
    let file = ReplayFile { command: command.to_string(), violations: violations.to_vec() };
    let json = serde_json::to_string_pretty(&file).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    fs::write(path, json).map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))
}

pub fn read_replay(path: &Path) -> Result<ReplayFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(e.to_string()))
}
