//! Qubit states and non-degenerate qubit observables in Bloch form.
//!
//! A state is ρ = (1 + r·σ)/2 with |r| ≤ 1 and an observable's
//! eigenprojectors are P± = (1 ± p·σ)/2 with |p| = 1. The measurement
//! channel projects r onto p, and every probability used downstream is an
//! affine function of a dot product.

use serde::{Deserialize, Serialize};

use crate::entropy::ProbabilityDistribution;
use crate::error::{Error, Result};

/// Default tolerance of the equality-condition predicates.
pub const DEFAULT_PREDICATE_TOL: f64 = 1e-9;

const STATE_NORM_TOL: f64 = 1e-12;
const AXIS_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub const ZERO: Self = Self { r1: 0.0, r2: 0.0, r3: 0.0 };
    pub const E1: Self = Self { r1: 1.0, r2: 0.0, r3: 0.0 };
    pub const E2: Self = Self { r1: 0.0, r2: 1.0, r3: 0.0 };
    pub const E3: Self = Self { r1: 0.0, r2: 0.0, r3: 1.0 };

    pub const fn new(r1: f64, r2: f64, r3: f64) -> Self {
        Self { r1, r2, r3 }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.r1 * other.r1 + self.r2 * other.r2 + self.r3 * other.r3
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.r2 * other.r3 - self.r3 * other.r2,
            self.r3 * other.r1 - self.r1 * other.r3,
            self.r1 * other.r2 - self.r2 * other.r1,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.r1, k * self.r2, k * self.r3)
    }

    pub fn is_finite(self) -> bool {
        self.r1.is_finite() && self.r2.is_finite() && self.r3.is_finite()
    }
}

impl std::ops::Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.r1 + o.r1, self.r2 + o.r2, self.r3 + o.r3)
    }
}

impl std::ops::Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.r1 - o.r1, self.r2 - o.r2, self.r3 - o.r3)
    }
}

/// A qubit density matrix held as its Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    bloch: BlochVector,
}

impl QubitState {
    pub fn new(bloch: BlochVector) -> Result<Self> {
        if !bloch.is_finite() {
            return Err(Error::InvalidState("non-finite Bloch vector".into()));
        }
        let n = bloch.norm();
        if n > 1.0 + STATE_NORM_TOL {
            return Err(Error::InvalidState(format!("Bloch vector length {n} exceeds 1")));
        }
        Ok(Self { bloch })
    }

    pub fn maximally_mixed() -> Self {
        Self { bloch: BlochVector::ZERO }
    }

    pub fn bloch(&self) -> BlochVector {
        self.bloch
    }

    /// Tr ρ² = (1 + |r|²)/2.
    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.bloch.dot(self.bloch))
    }

    /// Eigenvalues ((1+|r|)/2, (1-|r|)/2).
    pub fn spectrum(&self) -> ProbabilityDistribution {
        let n = self.bloch.norm().min(1.0);
        ProbabilityDistribution::new(vec![0.5 * (1.0 + n), 0.5 * (1.0 - n)])
            .expect("qubit spectrum is a distribution")
    }
}

/// A non-degenerate qubit observable z₊P₊ + z₋P₋.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitObservable {
    axis: BlochVector,
    eigen_plus: f64,
    eigen_minus: f64,
}

impl QubitObservable {
    /// Spin observable p·σ with eigenvalues ±1.
    pub fn spin(axis: BlochVector) -> Result<Self> {
        Self::new(axis, 1.0, -1.0)
    }

    pub fn new(axis: BlochVector, eigen_plus: f64, eigen_minus: f64) -> Result<Self> {
        if !axis.is_finite() || (axis.norm() - 1.0).abs() > AXIS_NORM_TOL {
            return Err(Error::InvalidObservable(format!("axis length {} is not 1", axis.norm())));
        }
        if !(eigen_plus.is_finite() && eigen_minus.is_finite()) || eigen_plus == eigen_minus {
            return Err(Error::InvalidObservable(format!(
                "eigenvalues {eigen_plus} and {eigen_minus} must be finite and distinct"
            )));
        }
        Ok(Self { axis, eigen_plus, eigen_minus })
    }

    /// Normalizes `axis`; a zero (or non-finite) axis is rejected.
    pub fn spin_normalized(axis: BlochVector) -> Result<Self> {
        let n = axis.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidObservable("axis is the zero vector".into()));
        }
        Self::spin(axis.scale(1.0 / n))
    }

    pub fn axis(&self) -> BlochVector {
        self.axis
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.eigen_plus, self.eigen_minus)
    }

    fn labels(&self) -> Vec<f64> {
        vec![self.eigen_plus, self.eigen_minus]
    }
}

fn binary(plus: f64, labels: Vec<f64>) -> ProbabilityDistribution {
    ProbabilityDistribution::with_labels(vec![plus, 1.0 - plus], labels).expect("binary distribution")
}

/// Outcome probabilities ((1 + p·r)/2, (1 - p·r)/2).
pub fn measurement_probabilities(state: &QubitState, obs: &QubitObservable) -> ProbabilityDistribution {
    let c = obs.axis.dot(state.bloch).clamp(-1.0, 1.0);
    binary(0.5 * (1.0 + c), obs.labels())
}

/// The non-selective measurement of `obs`: r ↦ (p·r) p.
pub fn dephase_channel(state: &QubitState, obs: &QubitObservable) -> QubitState {
    let c = obs.axis.dot(state.bloch).clamp(-1.0, 1.0);
    QubitState { bloch: obs.axis.scale(c) }
}

/// Probabilities of `second` measured after `first` with the outcome erased:
/// (1 ± (q·p)(p·r))/2.
pub fn second_measurement_probabilities(
    state: &QubitState,
    first: &QubitObservable,
    second: &QubitObservable,
) -> ProbabilityDistribution {
    let c = (overlap_mu(first, second) * first.axis.dot(state.bloch)).clamp(-1.0, 1.0);
    binary(0.5 * (1.0 + c), second.labels())
}

/// Rows p(x = n | z = m) = (1 + n m μ)/2, rows ordered (m = +1, m = -1).
pub fn conditional_probabilities(first: &QubitObservable, second: &QubitObservable) -> Vec<ProbabilityDistribution> {
    let mu = overlap_mu(first, second);
    [1.0, -1.0].iter().map(|m| binary(0.5 * (1.0 + m * mu), second.labels())).collect()
}

/// μ = q·p.
pub fn overlap_mu(first: &QubitObservable, second: &QubitObservable) -> f64 {
    first.axis.dot(second.axis).clamp(-1.0, 1.0)
}

/// ρ commutes with the observable iff |r × p| vanishes.
pub fn commutes_with(state: &QubitState, obs: &QubitObservable, tol: f64) -> bool {
    state.bloch.cross(obs.axis).norm() <= tol
}

/// Tr(Zρ) = Tr(Z)/2 iff p·r vanishes.
pub fn zero_mean_condition(state: &QubitState, obs: &QubitObservable, tol: f64) -> bool {
    obs.axis.dot(state.bloch).abs() <= tol
}
