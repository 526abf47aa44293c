//! Tight closed-form bounds on the successive-measurement entropies, and
//! reports that place an achieved value between them.
//!
//! * scenario 1, qubit: the entropy sum at fixed |r| lies between the η-sum
//!   evaluated at r₃ = |r| and 2 ln_α(2);
//! * scenario 2, qubit: form 1 is g_α(r₃) K with K = Σ_n η_α((1+nμ)/2), so it
//!   lies between g_α(|r|) K and 2^(1-α) K, the two roles swapping across α = 1;
//! * scenario 2, d dimensions: form 1 ≤ Tr(E_Z(ρ)^α) ln_α(d) and
//!   form 2 ≤ ln_α(d), both attained by mutually unbiased eigenbases.

use serde::{Deserialize, Serialize};

use crate::entropy::{alpha_log, EntropyOrder, Regime};
use crate::error::{Error, Result};
use crate::qubit::{self, QubitObservable, QubitState, DEFAULT_PREDICATE_TOL};
use crate::qudit::{self, QuditObservable, QuditState};
use crate::scenario::{self, binary_entropy_sum, conditional_constant, g_alpha};

pub const DEFAULT_SATURATION_TOL: f64 = 1e-9;

/// Tolerances for the geometric equality predicates and for numeric saturation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub predicate: f64,
    pub saturation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { predicate: DEFAULT_PREDICATE_TOL, saturation: DEFAULT_SATURATION_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

/// Where a report's lower bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundKind {
    ClosedForm,
    /// No closed-form bound exists; 0 is used.
    TrivialFloor,
}

/// Truth values of the equality conditions relevant to a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EqualityConditions {
    /// ρ commutes with the first observable.
    pub commutes: Option<bool>,
    /// Tr(Zρ) = Tr(Z)/2.
    pub zero_mean: Option<bool>,
    pub mutually_unbiased: Option<bool>,
    pub strictly_positive: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub quantity: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_residual: f64,
    pub upper_residual: f64,
    pub lower_saturated: bool,
    pub upper_saturated: bool,
    pub lower_kind: LowerBoundKind,
    pub conditions: EqualityConditions,
    /// The condition stated to hold exactly when the lower bound is attained.
    pub lower_equality: Option<bool>,
    /// The condition stated to hold exactly when the upper bound is attained.
    pub upper_equality: Option<bool>,
}

impl BoundReport {
    fn new(quantity: f64, bounds: BoundPair, lower_kind: LowerBoundKind, saturation_tol: f64) -> Self {
        let lower_residual = quantity - bounds.lower;
        let upper_residual = bounds.upper - quantity;
        Self {
            quantity,
            lower: bounds.lower,
            upper: bounds.upper,
            lower_residual,
            upper_residual,
            lower_saturated: lower_residual.abs() <= saturation_tol,
            upper_saturated: upper_residual.abs() <= saturation_tol,
            lower_kind,
            conditions: EqualityConditions::default(),
            lower_equality: None,
            upper_equality: None,
        }
    }

    pub fn within_bounds(&self, tol: f64) -> bool {
        self.lower_residual >= -tol && self.upper_residual >= -tol
    }

    /// Saturation flags agree with every wired equality condition.
    pub fn equality_conditions_consistent(&self) -> bool {
        self.lower_equality.is_none_or(|c| c == self.lower_saturated)
            && self.upper_equality.is_none_or(|c| c == self.upper_saturated)
    }
}

fn check_range(x: f64, lo: f64, hi: f64, what: &str) -> Result<f64> {
    if !x.is_finite() || x < lo - 1e-12 || x > hi + 1e-12 {
        return Err(Error::Domain(format!("{what} = {x} lies outside [{lo}, {hi}]")));
    }
    Ok(x.clamp(lo, hi))
}

/// Scenario-1 qubit bounds at fixed Bloch length.
pub fn prop1_bounds(r_norm: f64, mu: f64, order: EntropyOrder) -> Result<BoundPair> {
    let r = check_range(r_norm, 0.0, 1.0, "|r|")?;
    let mu = check_range(mu, -1.0, 1.0, "mu")?;
    Ok(BoundPair {
        lower: binary_entropy_sum(r, order) + binary_entropy_sum(mu * r, order),
        upper: 2.0 * alpha_log(2.0, order)?,
    })
}

pub fn prop1_report(
    state: &QubitState,
    first: &QubitObservable,
    second: &QubitObservable,
    order: EntropyOrder,
) -> Result<BoundReport> {
    prop1_report_with(state, first, second, order, Tolerances::default())
}

pub fn prop1_report_with(
    state: &QubitState,
    first: &QubitObservable,
    second: &QubitObservable,
    order: EntropyOrder,
    tol: Tolerances,
) -> Result<BoundReport> {
    let total = scenario::scenario1(state, first, second, order)?.total;
    let bounds = prop1_bounds(state.bloch().norm().min(1.0), qubit::overlap_mu(first, second), order)?;
    let commutes = qubit::commutes_with(state, first, tol.predicate);
    let zero_mean = qubit::zero_mean_condition(state, first, tol.predicate);
    let mut report = BoundReport::new(total, bounds, LowerBoundKind::ClosedForm, tol.saturation);
    report.conditions = EqualityConditions { commutes: Some(commutes), zero_mean: Some(zero_mean), ..Default::default() };
    report.lower_equality = Some(commutes);
    report.upper_equality = Some(zero_mean);
    Ok(report)
}

/// Scenario-2 qubit bounds on form 1, given g_α(|r|) = 1 + (1-α) S_α(ρ).
///
/// Below α = 1 the state factor gives the lower bound and 2^(1-α) the upper;
/// above α = 1 they swap. In the Shannon regime both equal K.
pub fn prop2_bounds(state_spectrum_factor: f64, mu: f64, order: EntropyOrder) -> Result<BoundPair> {
    let k = conditional_constant(mu, order)?;
    let jensen = 2f64.powf(1.0 - order.exponent());
    let (lo, hi) = if jensen < 1.0 { (jensen, 1.0) } else { (1.0, jensen) };
    let factor = check_range(state_spectrum_factor, lo, hi, "state spectrum factor")?;
    Ok(match order.regime() {
        Regime::Shannon => BoundPair { lower: k, upper: k },
        Regime::BelowOne => BoundPair { lower: factor * k, upper: jensen * k },
        Regime::AboveOne => BoundPair { lower: jensen * k, upper: factor * k },
    })
}

pub fn prop2_report(
    state: &QubitState,
    first: &QubitObservable,
    second: &QubitObservable,
    order: EntropyOrder,
) -> Result<BoundReport> {
    prop2_report_with(state, first, second, order, Tolerances::default())
}

pub fn prop2_report_with(
    state: &QubitState,
    first: &QubitObservable,
    second: &QubitObservable,
    order: EntropyOrder,
    tol: Tolerances,
) -> Result<BoundReport> {
    let form1 = scenario::scenario2(state, first, second, order)?.form1;
    let factor = g_alpha(state.bloch().norm().min(1.0), order)?;
    let bounds = prop2_bounds(factor, qubit::overlap_mu(first, second), order)?;
    let commutes = qubit::commutes_with(state, first, tol.predicate);
    let zero_mean = qubit::zero_mean_condition(state, first, tol.predicate);
    let mut report = BoundReport::new(form1, bounds, LowerBoundKind::ClosedForm, tol.saturation);
    report.conditions = EqualityConditions { commutes: Some(commutes), zero_mean: Some(zero_mean), ..Default::default() };
    match order.regime() {
        Regime::BelowOne => {
            report.lower_equality = Some(commutes);
            report.upper_equality = Some(zero_mean);
        }
        Regime::AboveOne => {
            report.lower_equality = Some(zero_mean);
            report.upper_equality = Some(commutes);
        }
        // The bounds coincide; no equality condition is attached.
        Regime::Shannon => {}
    }
    Ok(report)
}

/// d-dimensional scenario-2 certainty report for both conditional forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop3Report {
    pub form1: BoundReport,
    pub form2: BoundReport,
    pub mutually_unbiased: bool,
    pub strictly_positive: bool,
}

impl Prop3Report {
    pub fn both_saturated(&self) -> bool {
        self.form1.upper_saturated && self.form2.upper_saturated
    }

    /// Mutually unbiased eigenbases saturate both upper bounds.
    pub fn mub_implies_saturation(&self) -> bool {
        !self.mutually_unbiased || self.both_saturated()
    }

    /// For strictly positive ρ, saturating both bounds forces unbiasedness.
    pub fn saturation_implies_mub(&self) -> bool {
        !(self.strictly_positive && self.both_saturated()) || self.mutually_unbiased
    }
}

pub fn prop3_report(
    state: &QuditState,
    first: &QuditObservable,
    second: &QuditObservable,
    order: EntropyOrder,
) -> Result<Prop3Report> {
    prop3_report_with(state, first, second, order, Tolerances::default())
}

pub fn prop3_report_with(
    state: &QuditState,
    first: &QuditObservable,
    second: &QuditObservable,
    order: EntropyOrder,
    tol: Tolerances,
) -> Result<Prop3Report> {
    let two = scenario::scenario2(state, first, second, order)?;
    let ln_d = alpha_log(state.dim() as f64, order)?;
    // Tr(E_Z(ρ)^α) = Σ_z p(z)^α since E_Z(ρ) is diagonal in the Z basis.
    let trace_power = two.marginal.power_sum(order.exponent());
    let mutually_unbiased = qudit::is_mub_pair(first, second, tol.predicate)?;
    let strictly_positive = qudit::strictly_positive(state, tol.predicate);
    let conditions = EqualityConditions {
        mutually_unbiased: Some(mutually_unbiased),
        strictly_positive: Some(strictly_positive),
        ..Default::default()
    };
    let make = |quantity: f64, upper: f64| {
        let mut r = BoundReport::new(quantity, BoundPair { lower: 0.0, upper }, LowerBoundKind::TrivialFloor, tol.saturation);
        r.conditions = conditions;
        r
    };
    Ok(Prop3Report {
        form1: make(two.form1, trace_power * ln_d),
        form2: make(two.form2, ln_d),
        mutually_unbiased,
        strictly_positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::quantum_tsallis;
    use crate::qubit::BlochVector;
    use crate::verify::sampling::{haar_observable, positive_ginibre_state, rng_for};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn ord(a: f64) -> EntropyOrder {
        EntropyOrder::new(a).unwrap()
    }

    fn st(r: [f64; 3]) -> QubitState {
        QubitState::new(BlochVector::from_array(r)).unwrap()
    }

    fn spin(p: [f64; 3]) -> QubitObservable {
        QubitObservable::spin(BlochVector::from_array(p)).unwrap()
    }

    fn axis_at(mu: f64) -> QubitObservable {
        spin([(1.0 - mu * mu).sqrt(), 0.0, mu])
    }

    #[test]
    fn prop1_bound_examples() {
        for a in [0.3, 1.0, 2.0] {
            for mu in [-1.0, 0.0, 0.4] {
                let b = prop1_bounds(0.0, mu, ord(a)).unwrap();
                assert_abs_diff_eq!(b.lower, b.upper, epsilon = 1e-14);
            }
            assert_eq!(prop1_bounds(1.0, 1.0, ord(a)).unwrap().lower, 0.0);
            assert_eq!(prop1_bounds(1.0, -1.0, ord(a)).unwrap().lower, 0.0);
        }
        // η₂ sums at (0.9, 0.1) and (0.62, 0.38): 0.18 + 0.4712 (40-digit check).
        let b = prop1_bounds(0.8, 0.3, ord(2.0)).unwrap();
        assert_abs_diff_eq!(b.lower, 0.6512, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, 1.0, epsilon = 1e-15);
        assert!(prop1_bounds(1.2, 0.0, ord(2.0)).is_err());
        assert!(prop1_bounds(0.5, -1.5, ord(2.0)).is_err());
    }

    #[test]
    fn prop1_report_examples() {
        let z = spin([0.0, 0.0, 1.0]);
        let q = axis_at(0.5);
        for a in [0.5, 1.0, 2.0] {
            let r = prop1_report(&st([0.0, 0.0, 0.7]), &z, &q, ord(a)).unwrap();
            assert!(r.lower_saturated && !r.upper_saturated && r.equality_conditions_consistent());
            let r = prop1_report(&st([0.0, 0.7, 0.0]), &z, &q, ord(a)).unwrap();
            assert!(r.upper_saturated && !r.lower_saturated && r.equality_conditions_consistent());
        }
        let s = 0.9 * FRAC_1_SQRT_2;
        let r = prop1_report(&st([s, 0.0, s]), &z, &q, ord(0.5)).unwrap();
        assert!(!r.lower_saturated && !r.upper_saturated);
        assert!(r.lower_residual > 1e-6 && r.upper_residual > 1e-6);
        assert!(r.equality_conditions_consistent());
    }

    #[test]
    fn prop2_bound_examples() {
        let b = prop2_bounds(1.0, 0.0, ord(1.0)).unwrap();
        assert_abs_diff_eq!(b.lower, LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.upper, LN_2, epsilon = 1e-15);

        let g1 = g_alpha(1.0, ord(2.0)).unwrap();
        let b = prop2_bounds(g1, 0.0, ord(2.0)).unwrap();
        assert_abs_diff_eq!(b.upper, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.lower, 0.25, epsilon = 1e-15);

        for a in [0.3, 0.7, 2.0, 3.0] {
            let b = prop2_bounds(g_alpha(0.0, ord(a)).unwrap(), 0.35, ord(a)).unwrap();
            assert_abs_diff_eq!(b.lower, b.upper, epsilon = 1e-15);
        }
        assert!(prop2_bounds(1.2, 0.0, ord(2.0)).is_err());
        assert!(prop2_bounds(0.4, 0.0, ord(2.0)).is_err());
    }

    #[test]
    fn state_factor_is_one_plus_scaled_entropy() {
        for a in [0.3, 0.5, 2.0, 3.0] {
            let s = st([0.2, -0.3, 0.5]);
            let h = quantum_tsallis(&s.spectrum(), ord(a));
            let g = g_alpha(s.bloch().norm(), ord(a)).unwrap();
            assert_abs_diff_eq!(g, 1.0 + (1.0 - a) * h, epsilon = 1e-12);
        }
    }

    #[test]
    fn prop2_report_examples() {
        let z = spin([0.0, 0.0, 1.0]);
        let q = axis_at(0.3);
        let r = prop2_report(&st([0.0, 0.0, 0.6]), &z, &q, ord(0.5)).unwrap();
        assert!(r.lower_saturated && !r.upper_saturated && r.equality_conditions_consistent());
        let r = prop2_report(&st([0.0, 0.0, 0.6]), &z, &q, ord(2.0)).unwrap();
        assert!(r.upper_saturated && !r.lower_saturated && r.equality_conditions_consistent());
        let r = prop2_report(&st([0.6, 0.0, 0.0]), &z, &q, ord(2.0)).unwrap();
        assert!(r.lower_saturated && r.equality_conditions_consistent());
        let s = 0.7 * FRAC_1_SQRT_2;
        let r = prop2_report(&st([s, 0.0, s]), &z, &q, ord(2.0)).unwrap();
        assert!(r.lower_residual > 1e-6 && r.upper_residual > 1e-6);
        let r = prop2_report(&st([s, 0.0, s]), &z, &q, ord(1.0)).unwrap();
        assert!(r.lower_saturated && r.upper_saturated && r.lower_equality.is_none());
    }

    #[test]
    fn prop3_report_examples() {
        let (f, g) = qudit::fourier_mub_pair(3).unwrap();
        let r = prop3_report(&QuditState::maximally_mixed(3).unwrap(), &f, &g, ord(2.0)).unwrap();
        assert_abs_diff_eq!(r.form2.quantity, 2.0 / 3.0, epsilon = 1e-12);
        assert!(r.form2.upper_residual.abs() < 1e-12 && r.both_saturated());
        assert_eq!(r.form2.lower, 0.0);
        assert_eq!(r.form2.lower_kind, LowerBoundKind::TrivialFloor);
        assert!(r.mub_implies_saturation() && r.saturation_implies_mub());

        let mut rng = rng_for(41, 0);
        for d in 2..=4 {
            let rho = positive_ginibre_state(d, 1e-3, &mut rng);
            let a = haar_observable(d, &mut rng);
            let same = prop3_report(&rho, &a, &a, ord(2.0)).unwrap();
            assert!(same.form1.quantity.abs() < 1e-12 && same.form2.quantity.abs() < 1e-12);
            let b = haar_observable(d, &mut rng);
            let r = prop3_report(&rho, &a, &b, ord(2.0)).unwrap();
            assert!(r.form2.upper_residual > 1e-6 && !r.mutually_unbiased);
            assert!(r.form1.within_bounds(1e-9) && r.saturation_implies_mub());
        }
        let q3 = QuditObservable::computational(3).unwrap();
        let q2 = QuditObservable::computational(2).unwrap();
        assert!(prop3_report(&QuditState::maximally_mixed(3).unwrap(), &q3, &q2, ord(2.0)).is_err());
    }
}
