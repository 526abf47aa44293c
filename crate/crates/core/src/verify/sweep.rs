//! Fixed-purity sweeps over the component r₃ = p·r ∈ [-|r|, |r|].
//!
//! Each cell builds real qubit instances along the sweep (first axis e₃,
//! second axis at overlap μ, Bloch vector of length |r| tilted to the
//! requested r₃), runs them through the probability pipeline and compares
//! the observed extrema against the closed-form bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{prop1_bounds, prop2_bounds, BoundPair};
use crate::entropy::{EntropyOrder, Regime};
use crate::error::{Error, Result};
use crate::qubit::{BlochVector, QubitObservable, QubitState};
use crate::scenario::{g_alpha, scenario1, scenario2};

use super::{CheckKind, Instance, Violation};

pub const DEFAULT_R3_POINTS: usize = 2001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub r_norm: f64,
    pub mu_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    /// Odd, so r₃ = 0 is on the grid; the endpoints ±|r| always are.
    pub r3_points: usize,
    /// Carried for provenance; the sweep itself draws no randomness.
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(r_norm: f64, mu_grid: Vec<f64>, alpha_grid: Vec<f64>) -> Self {
        Self { r_norm, mu_grid, alpha_grid, r3_points: DEFAULT_R3_POINTS, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r_norm) {
            return Err(Error::InvalidConfig(format!("r_norm {} outside [0, 1]", self.r_norm)));
        }
        if self.r3_points < 3 || self.r3_points.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("r3_points must be odd and >= 3, got {}", self.r3_points)));
        }
        if self.mu_grid.is_empty() || self.alpha_grid.is_empty() {
            return Err(Error::InvalidConfig("mu and alpha grids must be non-empty".into()));
        }
        if let Some(mu) = self.mu_grid.iter().find(|m| !(-1.0..=1.0).contains(*m)) {
            return Err(Error::InvalidConfig(format!("mu {mu} outside [-1, 1]")));
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidConfig(format!("alpha {a} is not positive")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Entropy sum against the scenario-1 qubit bounds.
    ScenarioOne,
    /// Form-1 conditional entropy against the scenario-2 qubit bounds.
    ScenarioTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub alpha: f64,
    pub mu: f64,
    pub r_norm: f64,
    pub min: f64,
    pub argmin_r3: f64,
    pub max: f64,
    pub argmax_r3: f64,
    pub lower: f64,
    pub upper: f64,
    /// min - lower.
    pub min_residual: f64,
    /// upper - max.
    pub max_residual: f64,
}

impl SweepCell {
    pub fn regime(&self) -> Regime {
        EntropyOrder::new(self.alpha).map(|o| o.regime()).unwrap_or(Regime::Shannon)
    }

    /// The swept quantity is constant to within `tol`.
    pub fn is_flat(&self, tol: f64) -> bool {
        self.max - self.min <= tol
    }

    pub fn argmin_at_edge(&self) -> bool {
        self.argmin_r3.abs() == self.r_norm
    }

    pub fn argmax_at_edge(&self) -> bool {
        self.argmax_r3.abs() == self.r_norm
    }

    pub fn argmin_at_center(&self) -> bool {
        self.argmin_r3 == 0.0
    }

    pub fn argmax_at_center(&self) -> bool {
        self.argmax_r3 == 0.0
    }

    /// Both extrema coincide with the closed-form bounds to within `tol`.
    pub fn is_tight(&self, tol: f64) -> bool {
        self.min_residual.abs() <= tol && self.max_residual.abs() <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub config: SweepConfig,
    /// Alpha-major, mu-minor order.
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    /// Cells whose extrema cross a bound, or fail to reach it, by more than `tol`.
    pub fn violations(&self, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for c in &self.cells {
            let sides = [
                (CheckKind::SweepLower, c.min, c.lower, c.min_residual, c.argmin_r3),
                (CheckKind::SweepUpper, c.max, c.upper, c.max_residual, c.argmax_r3),
            ];
            for (check, observed, bound, margin, r3) in sides {
                if margin.abs() > tol {
                    out.push(Violation {
                        check,
                        seed: self.config.seed,
                        stream: 0,
                        dim: 2,
                        alpha: c.alpha,
                        observed,
                        bound,
                        margin,
                        instance: Instance::Sweep { kind: self.kind, r_norm: c.r_norm, mu: c.mu, r3 },
                    });
                }
            }
        }
        out
    }
}

/// `n` evenly spaced points on [-r, r] with exact endpoints and centre.
pub fn r3_grid(r_norm: f64, n: usize) -> Vec<f64> {
    let span = (n - 1) as f64;
    (0..n).map(|i| r_norm * ((2 * i) as f64 - span) / span).collect()
}

/// First axis e₃, second axis with overlap μ in the x-z plane.
pub fn sweep_observables(mu: f64) -> Result<(QubitObservable, QubitObservable)> {
    let first = QubitObservable::spin(BlochVector::E3)?;
    let second = QubitObservable::spin(BlochVector::new((1.0 - mu * mu).max(0.0).sqrt(), 0.0, mu))?;
    Ok((first, second))
}

/// State with |r| = `r_norm` and p·r = `r3` for p = e₃.
pub fn sweep_state(r_norm: f64, r3: f64) -> Result<QubitState> {
    let perp = (r_norm * r_norm - r3 * r3).max(0.0).sqrt();
    QubitState::new(BlochVector::new(0.0, perp, r3))
}

fn evaluate(kind: SweepKind, r_norm: f64, r3: f64, first: &QubitObservable, second: &QubitObservable, order: EntropyOrder) -> Result<f64> {
    let state = sweep_state(r_norm, r3)?;
    Ok(match kind {
        SweepKind::ScenarioOne => scenario1(&state, first, second, order)?.total,
        SweepKind::ScenarioTwo => scenario2(&state, first, second, order)?.form1,
    })
}

/// Value of the swept quantity at a single grid point.
pub fn sweep_point(kind: SweepKind, r_norm: f64, mu: f64, r3: f64, order: EntropyOrder) -> Result<f64> {
    let (first, second) = sweep_observables(mu)?;
    evaluate(kind, r_norm, r3, &first, &second, order)
}

fn closed_form_bounds(kind: SweepKind, r_norm: f64, mu: f64, order: EntropyOrder) -> Result<BoundPair> {
    match kind {
        SweepKind::ScenarioOne => prop1_bounds(r_norm, mu, order),
        SweepKind::ScenarioTwo => prop2_bounds(g_alpha(r_norm, order)?, mu, order),
    }
}

fn sweep_cell(kind: SweepKind, grid: &[f64], r_norm: f64, mu: f64, alpha: f64) -> Result<SweepCell> {
    let order = EntropyOrder::new(alpha)?;
    let (first, second) = sweep_observables(mu)?;
    let (mut min, mut argmin, mut max, mut argmax) = (f64::INFINITY, 0.0, f64::NEG_INFINITY, 0.0);
    for &r3 in grid {
        let v = evaluate(kind, r_norm, r3, &first, &second, order)?;
        if v < min {
            min = v;
            argmin = r3;
        }
        if v > max {
            max = v;
            argmax = r3;
        }
    }
    let bounds = closed_form_bounds(kind, r_norm, mu, order)?;
    Ok(SweepCell {
        alpha,
        mu,
        r_norm,
        min,
        argmin_r3: argmin,
        max,
        argmax_r3: argmax,
        lower: bounds.lower,
        upper: bounds.upper,
        min_residual: min - bounds.lower,
        max_residual: bounds.upper - max,
    })
}

pub fn sweep(kind: SweepKind, config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let grid = r3_grid(config.r_norm, config.r3_points);
    let jobs: Vec<(f64, f64)> = config
        .alpha_grid
        .iter()
        .flat_map(|&a| config.mu_grid.iter().map(move |&m| (a, m)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(alpha, mu)| sweep_cell(kind, &grid, config.r_norm, mu, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { kind, config: config.clone(), cells })
}

pub fn sweep_scenario1(config: &SweepConfig) -> Result<SweepResult> {
    sweep(SweepKind::ScenarioOne, config)
}

pub fn sweep_scenario2(config: &SweepConfig) -> Result<SweepResult> {
    sweep(SweepKind::ScenarioTwo, config)
}
