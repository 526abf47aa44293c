//! Scalar entropic functions: the α-logarithm, the η function, Tsallis
//! entropy, the Tsallis-to-Rényi conversion, the quantum α-entropy of a
//! spectrum and the two conditional Tsallis forms.
//!
//! Every function switches to the Shannon (natural-log) formulas when the
//! order lies within [`EntropyOrder::shannon_switch_width`] of 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the band around α = 1 treated as the Shannon limit.
pub const DEFAULT_SHANNON_SWITCH_WIDTH: f64 = 1e-6;

/// Probabilities this far outside `[0, 1]` are clamped; further is an error.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// Allowed deviation of a distribution's total mass from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// The entropic order α > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyOrder {
    alpha: f64,
    shannon_switch_width: f64,
}

/// Which side of α = 1 an order lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    BelowOne,
    Shannon,
    AboveOne,
}

impl EntropyOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_switch_width(alpha, DEFAULT_SHANNON_SWITCH_WIDTH)
    }

    pub fn with_switch_width(alpha: f64, shannon_switch_width: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("entropy order must be positive, got {alpha}")));
        }
        if !(shannon_switch_width > 0.0 && shannon_switch_width < 0.5) {
            return Err(Error::Domain(format!(
                "shannon switch width must lie in (0, 0.5), got {shannon_switch_width}"
            )));
        }
        Ok(Self { alpha, shannon_switch_width })
    }

    /// α = 1 exactly.
    pub fn shannon() -> Self {
        Self { alpha: 1.0, shannon_switch_width: DEFAULT_SHANNON_SWITCH_WIDTH }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn shannon_switch_width(&self) -> f64 {
        self.shannon_switch_width
    }

    pub fn is_shannon(&self) -> bool {
        (self.alpha - 1.0).abs() < self.shannon_switch_width
    }

    /// The exponent used in power sums: α, or exactly 1 in the Shannon regime.
    pub fn exponent(&self) -> f64 {
        if self.is_shannon() {
            1.0
        } else {
            self.alpha
        }
    }

    pub fn regime(&self) -> Regime {
        if self.is_shannon() {
            Regime::Shannon
        } else if self.alpha < 1.0 {
            Regime::BelowOne
        } else {
            Regime::AboveOne
        }
    }
}

/// Clamp `x` into `[0, 1]` if it is within [`CLAMP_TOLERANCE`] of the interval.
pub(crate) fn clamp_unit(x: f64) -> Result<f64> {
    if !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&x) {
        return Err(Error::Domain(format!("value {x} lies outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// A finite probability vector with one real label per outcome.
///
/// Labels are the eigenvalues of the measured observable, or the outcome
/// index when no observable is attached. They never enter an entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
    labels: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Distribution labelled `0, 1, ..., n-1`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| i as f64).collect();
        Self::with_labels(probs, labels)
    }

    pub fn with_labels(probs: Vec<f64>, labels: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if probs.len() != labels.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities but {} labels",
                probs.len(),
                labels.len()
            )));
        }
        let probs = probs
            .into_iter()
            .map(|p| clamp_unit(p).map_err(|_| Error::InvalidDistribution(format!("entry {p} outside [0, 1]"))))
            .collect::<Result<Vec<_>>>()?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { probs, labels })
    }

    /// Build from nonnegative weights (up to rounding) by clamping tiny
    /// negatives to zero and dividing by the total.
    pub(crate) fn from_weights(weights: Vec<f64>, labels: Vec<f64>, negative_tol: f64) -> Result<Self> {
        let mut clamped = Vec::with_capacity(weights.len());
        for w in weights {
            if !w.is_finite() || w < -negative_tol {
                return Err(Error::InvalidDistribution(format!("weight {w} is negative")));
            }
            clamped.push(w.max(0.0));
        }
        let total: f64 = clamped.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        clamped.iter_mut().for_each(|w| *w /= total);
        Self::with_labels(clamped, labels)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::InvalidDistribution(format!("index {index} out of {n} outcomes")));
        }
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Self::new(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Σ p^α, the quantity every Tsallis and Rényi value is built from.
    pub fn power_sum(&self, alpha: f64) -> f64 {
        self.probs.iter().filter(|&&p| p > 0.0).map(|p| p.powf(alpha)).sum()
    }
}

/// A marginal over the first outcome z and one conditional over x per z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalTable {
    marginal: ProbabilityDistribution,
    conditionals: Vec<ProbabilityDistribution>,
}

impl ConditionalTable {
    pub fn new(marginal: ProbabilityDistribution, conditionals: Vec<ProbabilityDistribution>) -> Result<Self> {
        if conditionals.len() != marginal.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} marginal outcomes but {} conditionals",
                marginal.len(),
                conditionals.len()
            )));
        }
        let x_labels = conditionals[0].labels();
        if conditionals.iter().any(|c| c.labels() != x_labels) {
            return Err(Error::InvalidDistribution("conditionals do not share one label set".into()));
        }
        let joint: f64 = marginal
            .probs()
            .iter()
            .zip(&conditionals)
            .map(|(pz, c)| c.probs().iter().map(|px| px * pz).sum::<f64>())
            .sum();
        if (joint - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("joint distribution sums to {joint}")));
        }
        Ok(Self { marginal, conditionals })
    }

    pub fn marginal(&self) -> &ProbabilityDistribution {
        &self.marginal
    }

    pub fn conditionals(&self) -> &[ProbabilityDistribution] {
        &self.conditionals
    }

    /// H_α(X|z) for every first outcome z, in marginal order.
    pub fn per_outcome_entropies(&self, order: EntropyOrder) -> Vec<f64> {
        self.conditionals.iter().map(|c| tsallis(c, order)).collect()
    }
}

/// ln_α(ξ) = (ξ^(1-α) - 1)/(1-α); ln ξ in the Shannon regime.
pub fn alpha_log(xi: f64, order: EntropyOrder) -> Result<f64> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::Domain(format!("alpha-logarithm needs a positive argument, got {xi}")));
    }
    if order.is_shannon() {
        return Ok(xi.ln());
    }
    let k = 1.0 - order.alpha;
    Ok((k * xi.ln()).exp_m1() / k)
}

/// η_α(ξ) = (ξ^α - ξ)/(1-α); -ξ ln ξ in the Shannon regime.
pub fn eta(xi: f64, order: EntropyOrder) -> Result<f64> {
    let xi = clamp_unit(xi)?;
    Ok(eta_unchecked(xi, order))
}

pub(crate) fn eta_unchecked(xi: f64, order: EntropyOrder) -> f64 {
    if xi == 0.0 || xi == 1.0 {
        return 0.0;
    }
    let ln = xi.ln();
    if order.is_shannon() {
        return -xi * ln;
    }
    let k = order.alpha - 1.0;
    // ξ^α - ξ = ξ (e^{(α-1) ln ξ} - 1)
    -xi * (k * ln).exp_m1() / k
}

/// Tsallis entropy (Σ p^α - 1)/(1-α), or Shannon entropy near α = 1.
pub fn tsallis(dist: &ProbabilityDistribution, order: EntropyOrder) -> f64 {
    if order.is_shannon() {
        return dist.probs().iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    }
    (dist.power_sum(order.alpha) - 1.0) / (1.0 - order.alpha)
}

/// Rényi entropy recovered from a Tsallis value of the same order.
pub fn renyi_from_tsallis(h: f64, order: EntropyOrder) -> Result<f64> {
    if order.is_shannon() {
        return Ok(h);
    }
    let k = 1.0 - order.alpha;
    let scaled = k * h;
    if scaled.is_nan() || 1.0 + scaled <= 0.0 {
        return Err(Error::Domain(format!("log argument 1 + (1-α)h = {} is not positive", 1.0 + scaled)));
    }
    Ok(scaled.ln_1p() / k)
}

/// Quantum α-entropy (Tr ρ^α - 1)/(1-α) evaluated on a density-matrix spectrum.
pub fn quantum_tsallis(eigenvalues: &ProbabilityDistribution, order: EntropyOrder) -> f64 {
    tsallis(eigenvalues, order)
}

/// Σ_z p(z)^α H_α(X|z).
pub fn conditional_tsallis_form1(table: &ConditionalTable, order: EntropyOrder) -> f64 {
    let alpha = order.exponent();
    table
        .marginal()
        .probs()
        .iter()
        .zip(table.per_outcome_entropies(order))
        .filter(|(&pz, _)| pz > 0.0)
        .map(|(&pz, h)| pz.powf(alpha) * h)
        .sum()
}

/// Σ_z p(z) H_α(X|z).
pub fn conditional_tsallis_form2(table: &ConditionalTable, order: EntropyOrder) -> f64 {
    table
        .marginal()
        .probs()
        .iter()
        .zip(table.per_outcome_entropies(order))
        .map(|(&pz, h)| pz * h)
        .sum()
}
