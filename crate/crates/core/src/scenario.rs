//! The two successive-measurement uncertainty quantities.
//!
//! Scenario 1 measures `first`, forgets the outcome, then measures `second`;
//! its uncertainty is the sum of the two outcome entropies. Scenario 2
//! measures `second` on the eigenprojector selected by the actual outcome
//! of `first`; its uncertainty is a conditional Tsallis entropy.
//!
//! Both qubit (Bloch) and qudit (matrix) states go through the same
//! probability pipeline via [`SuccessiveMeasurement`]. The qubit closed
//! forms below are kept as an independent route for cross-checking; the
//! pipeline is authoritative.

use serde::{Deserialize, Serialize};

use crate::entropy::{
    alpha_log, conditional_tsallis_form1, conditional_tsallis_form2, eta_unchecked, quantum_tsallis, tsallis,
    ConditionalTable, EntropyOrder, ProbabilityDistribution,
};
use crate::error::{Error, Result};
use crate::qubit::{self, QubitObservable, QubitState};
use crate::qudit::{self, QuditObservable, QuditState};

/// A state type that can be measured projectively by its observable type.
pub trait SuccessiveMeasurement: Sized {
    type Observable;

    fn dimension(&self) -> usize;

    /// Tr(P_z ρ) over the eigenprojectors of `obs`.
    fn outcome_distribution(&self, obs: &Self::Observable) -> Result<ProbabilityDistribution>;

    /// The non-selective measurement channel applied to `self`.
    fn dephased(&self, obs: &Self::Observable) -> Result<Self>;

    /// Rows p(x|z) = Tr(Q_x P_z), one per outcome of `first`.
    fn transition_rows(first: &Self::Observable, second: &Self::Observable) -> Result<Vec<ProbabilityDistribution>>;

    fn spectrum(&self) -> ProbabilityDistribution;
}

impl SuccessiveMeasurement for QubitState {
    type Observable = QubitObservable;

    fn dimension(&self) -> usize {
        2
    }

    fn outcome_distribution(&self, obs: &QubitObservable) -> Result<ProbabilityDistribution> {
        Ok(qubit::measurement_probabilities(self, obs))
    }

    fn dephased(&self, obs: &QubitObservable) -> Result<Self> {
        Ok(qubit::dephase_channel(self, obs))
    }

    fn transition_rows(first: &QubitObservable, second: &QubitObservable) -> Result<Vec<ProbabilityDistribution>> {
        Ok(qubit::conditional_probabilities(first, second))
    }

    fn spectrum(&self) -> ProbabilityDistribution {
        QubitState::spectrum(self)
    }
}

impl SuccessiveMeasurement for QuditState {
    type Observable = QuditObservable;

    fn dimension(&self) -> usize {
        self.dim()
    }

    fn outcome_distribution(&self, obs: &QuditObservable) -> Result<ProbabilityDistribution> {
        qudit::outcome_probabilities(self, obs)
    }

    fn dephased(&self, obs: &QuditObservable) -> Result<Self> {
        qudit::dephase_channel_d(self, obs)
    }

    fn transition_rows(first: &QuditObservable, second: &QuditObservable) -> Result<Vec<ProbabilityDistribution>> {
        qudit::conditional_probabilities_d(first, second)
    }

    fn spectrum(&self) -> ProbabilityDistribution {
        QuditState::spectrum(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOneResult {
    pub first_entropy: f64,
    pub second_entropy: f64,
    pub total: f64,
    pub alpha: EntropyOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTwoResult {
    pub form1: f64,
    pub form2: f64,
    /// H_α(X|z) in the outcome order of the first observable.
    pub per_outcome: Vec<f64>,
    pub marginal: ProbabilityDistribution,
}

/// Quantum-entropy sandwich around the scenario-1 total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumSides {
    /// S_α(ρ) + S_α(E_Z(ρ)).
    pub lower: f64,
    /// 2 S_α(1/d) = 2 ln_α(d).
    pub upper: f64,
}

/// H_α(Z; ρ) + H_α(X; E_Z(ρ)).
pub fn scenario1<S: SuccessiveMeasurement>(
    state: &S,
    first: &S::Observable,
    second: &S::Observable,
    order: EntropyOrder,
) -> Result<ScenarioOneResult> {
    let first_entropy = tsallis(&state.outcome_distribution(first)?, order);
    let second_entropy = tsallis(&state.dephased(first)?.outcome_distribution(second)?, order);
    Ok(ScenarioOneResult { first_entropy, second_entropy, total: first_entropy + second_entropy, alpha: order })
}

pub fn scenario1_quantum_sides<S: SuccessiveMeasurement>(
    state: &S,
    first: &S::Observable,
    order: EntropyOrder,
) -> Result<QuantumSides> {
    let lower = quantum_tsallis(&state.spectrum(), order) + quantum_tsallis(&state.dephased(first)?.spectrum(), order);
    let upper = 2.0 * alpha_log(state.dimension() as f64, order)?;
    Ok(QuantumSides { lower, upper })
}

/// Conditional entropies Σ p(z)^α H_α(X|z) and Σ p(z) H_α(X|z).
///
/// Outcomes with p(z) = 0 keep a well-defined H_α(X|z) (it does not depend
/// on the state) and weigh 0 in both sums.
pub fn scenario2<S: SuccessiveMeasurement>(
    state: &S,
    first: &S::Observable,
    second: &S::Observable,
    order: EntropyOrder,
) -> Result<ScenarioTwoResult> {
    let marginal = state.outcome_distribution(first)?;
    let table = ConditionalTable::new(marginal, S::transition_rows(first, second)?)?;
    Ok(ScenarioTwoResult {
        form1: conditional_tsallis_form1(&table, order),
        form2: conditional_tsallis_form2(&table, order),
        per_outcome: table.per_outcome_entropies(order),
        marginal: table.marginal().clone(),
    })
}

fn check_unit_interval(x: f64, what: &str) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("{what} = {x} lies outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// Σ_n η_α((1 + n c)/2), the entropy of the binary distribution ((1±c)/2).
pub fn binary_entropy_sum(c: f64, order: EntropyOrder) -> f64 {
    eta_unchecked(0.5 * (1.0 + c), order) + eta_unchecked(0.5 * (1.0 - c), order)
}

/// g_α(r₃) = ((1+r₃)/2)^α + ((1-r₃)/2)^α.
pub fn g_alpha(r3: f64, order: EntropyOrder) -> Result<f64> {
    let r3 = check_unit_interval(r3, "r3")?;
    let a = order.exponent();
    let pow = |x: f64| if x == 0.0 { 0.0 } else { x.powf(a) };
    Ok(pow(0.5 * (1.0 + r3)) + pow(0.5 * (1.0 - r3)))
}

/// The state-independent H_α(X|z=±1) = Σ_n η_α((1+nμ)/2) of a qubit pair.
pub fn conditional_constant(mu: f64, order: EntropyOrder) -> Result<f64> {
    Ok(binary_entropy_sum(check_unit_interval(mu, "mu")?, order))
}

/// Closed-form qubit scenario-1 total, Σ_m η_α((1+m r₃)/2) + Σ_n η_α((1+n μ r₃)/2).
pub fn qubit_scenario1_closed_form(r3: f64, mu: f64, order: EntropyOrder) -> Result<f64> {
    let r3 = check_unit_interval(r3, "r3")?;
    let mu = check_unit_interval(mu, "mu")?;
    Ok(binary_entropy_sum(r3, order) + binary_entropy_sum(mu * r3, order))
}

/// Closed-form qubit scenario-2 entropies (form1, form2) = (g_α(r₃) K, K).
pub fn qubit_scenario2_closed_form(r3: f64, mu: f64, order: EntropyOrder) -> Result<(f64, f64)> {
    let k = conditional_constant(mu, order)?;
    Ok((g_alpha(r3, order)? * k, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::BlochVector;
    use crate::verify::sampling::{ginibre_state, haar_observable, qubit_state_in_ball, rng_for, spin_observable};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

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

    const ALPHAS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

    #[test]
    fn scenario1_examples() {
        let z = spin([0.0, 0.0, 1.0]);
        let x = spin([1.0, 0.0, 0.0]);
        for a in ALPHAS {
            let r = scenario1(&QubitState::maximally_mixed(), &z, &x, ord(a)).unwrap();
            assert_abs_diff_eq!(r.total, 2.0 * alpha_log(2.0, ord(a)).unwrap(), epsilon = 1e-14);
            assert_abs_diff_eq!(r.total, r.first_entropy + r.second_entropy, epsilon = 1e-15);
            let pure = scenario1(&st([0.0, 0.0, 1.0]), &z, &z, ord(a)).unwrap();
            assert_eq!(pure.total, 0.0);
        }
        // |r| = r₃ = 0.8, μ = 0.5, α = 2: η₂ sums of (0.9, 0.1) and (0.7, 0.3)
        // give 0.18 + 0.42 = 0.6 exactly (40-digit check).
        let r = scenario1(&st([0.0, 0.0, 0.8]), &z, &axis_at(0.5), ord(2.0)).unwrap();
        assert_abs_diff_eq!(r.total, 0.6, epsilon = 1e-12);
    }

    #[test]
    fn scenario1_quantum_side_examples() {
        let z = spin([0.0, 0.0, 1.0]);
        for a in ALPHAS {
            let o = ord(a);
            let pure = st([0.6, 0.0, 0.8]);
            let sides = scenario1_quantum_sides(&pure, &z, o).unwrap();
            let dephased = tsallis(&qubit::dephase_channel(&pure, &z).spectrum(), o);
            assert_abs_diff_eq!(sides.lower, dephased, epsilon = 1e-12);
            assert_abs_diff_eq!(sides.upper, 2.0 * alpha_log(2.0, o).unwrap(), epsilon = 1e-15);

            let aligned = st([0.0, 0.0, 0.6]);
            let sides = scenario1_quantum_sides(&aligned, &z, o).unwrap();
            let s = tsallis(&ProbabilityDistribution::new(vec![0.8, 0.2]).unwrap(), o);
            assert_abs_diff_eq!(sides.lower, 2.0 * s, epsilon = 1e-12);
        }
    }

    #[test]
    fn scenario2_examples() {
        let z = spin([0.0, 0.0, 1.0]);
        let x = spin([0.0, 1.0, 0.0]);
        let mut rng = rng_for(3, 0);
        for a in ALPHAS {
            let o = ord(a);
            let s = qubit_state_in_ball(&mut rng);
            let r = scenario2(&s, &z, &x, o).unwrap();
            let ln2 = alpha_log(2.0, o).unwrap();
            assert_abs_diff_eq!(r.form2, ln2, epsilon = 1e-12);
            assert_abs_diff_eq!(r.form1, g_alpha(s.bloch().r3, o).unwrap() * ln2, epsilon = 1e-12);
        }
        for mu in [-0.9, -0.2, 0.4, 1.0] {
            let r = scenario2(&st([0.3, 0.1, 0.5]), &z, &axis_at(mu), ord(1.0)).unwrap();
            assert_abs_diff_eq!(r.form1, r.form2, epsilon = 1e-12);
            assert_abs_diff_eq!(r.form1, binary_entropy_sum(mu, ord(1.0)), epsilon = 1e-12);
            assert!(r.form1 <= LN_2 + 1e-15);
        }
        // d = 3 Fourier pair, ρ = 1/3, α = 2: every H₂(X|z) = 1 - 3·(1/9) = 2/3.
        let (f, g) = qudit::fourier_mub_pair(3).unwrap();
        let r = scenario2(&QuditState::maximally_mixed(3).unwrap(), &f, &g, ord(2.0)).unwrap();
        for h in &r.per_outcome {
            assert_abs_diff_eq!(*h, 2.0 / 3.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(r.form2, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.form1, 3.0 * (1.0f64 / 3.0).powi(2) * 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_probability_outcome_weighs_nothing() {
        let z = spin([0.0, 0.0, 1.0]);
        let r = scenario2(&st([0.0, 0.0, 1.0]), &z, &axis_at(0.3), ord(2.0)).unwrap();
        assert_eq!(r.marginal.probs()[1], 0.0);
        assert!(r.per_outcome[1] > 0.0);
        assert_abs_diff_eq!(r.form1, r.per_outcome[0], epsilon = 1e-15);
        assert_abs_diff_eq!(r.form2, r.per_outcome[0], epsilon = 1e-15);
    }

    #[test]
    fn g_alpha_examples() {
        for a in [0.3, 0.5, 2.0, 3.0] {
            assert_abs_diff_eq!(g_alpha(0.0, ord(a)).unwrap(), 2f64.powf(1.0 - a), epsilon = 1e-15);
            assert_eq!(g_alpha(1.0, ord(a)).unwrap(), 1.0);
            assert_eq!(g_alpha(-1.0, ord(a)).unwrap(), 1.0);
            assert_eq!(g_alpha(0.35, ord(a)).unwrap(), g_alpha(-0.35, ord(a)).unwrap());
        }
        assert_abs_diff_eq!(g_alpha(0.6, ord(2.0)).unwrap(), 0.68, epsilon = 1e-15);
        assert!(g_alpha(1.5, ord(2.0)).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = QuditObservable::computational(3).unwrap();
        let b = QuditObservable::computational(2).unwrap();
        let s = QuditState::maximally_mixed(3).unwrap();
        assert!(matches!(scenario2(&s, &a, &b, ord(2.0)), Err(Error::DimensionMismatch { .. })));
        assert!(scenario1(&s, &b, &b, ord(2.0)).is_err());
    }

    #[test]
    fn pipeline_matches_closed_forms_and_properties() {
        let mut rng = rng_for(31, 0);
        let (p, q) = (spin_observable(&mut rng), spin_observable(&mut rng));
        let fixed_form2 = scenario2(&QubitState::maximally_mixed(), &p, &q, ord(2.0)).unwrap().form2;
        for i in 0..1000 {
            let s = qubit_state_in_ball(&mut rng);
            let (first, second) = (spin_observable(&mut rng), spin_observable(&mut rng));
            let r3 = first.axis().dot(s.bloch());
            let mu = qubit::overlap_mu(&first, &second);
            for a in [0.3, 0.5, 1.0, 2.0, 3.0] {
                let o = ord(a);
                let one = scenario1(&s, &first, &second, o).unwrap();
                assert_abs_diff_eq!(one.total, qubit_scenario1_closed_form(r3, mu, o).unwrap(), epsilon = 1e-12);
                let sides = scenario1_quantum_sides(&s, &first, o).unwrap();
                assert!(sides.lower - 1e-10 <= one.total && one.total <= sides.upper + 1e-10);

                let two = scenario2(&s, &first, &second, o).unwrap();
                let (c1, c2) = qubit_scenario2_closed_form(r3, mu, o).unwrap();
                assert_abs_diff_eq!(two.form1, c1, epsilon = 1e-12);
                assert_abs_diff_eq!(two.form2, c2, epsilon = 1e-12);
                assert_abs_diff_eq!(two.form1, g_alpha(r3, o).unwrap() * two.form2, epsilon = 1e-12);
            }
            if i < 100 {
                let two = scenario2(&s, &p, &q, ord(2.0)).unwrap();
                assert_abs_diff_eq!(two.form2, fixed_form2, epsilon = 1e-12);
            }
        }
        // qudit sandwich for random d-dimensional instances
        let mut rng = rng_for(37, 0);
        for i in 0..300 {
            let d = 2 + i % 4;
            let s = ginibre_state(d, &mut rng);
            let (a, b) = (haar_observable(d, &mut rng), haar_observable(d, &mut rng));
            for al in ALPHAS {
                let o = ord(al);
                let one = scenario1(&s, &a, &b, o).unwrap();
                let sides = scenario1_quantum_sides(&s, &a, o).unwrap();
                assert!(sides.lower - 1e-10 <= one.total && one.total <= sides.upper + 1e-10);
            }
        }
    }
}
