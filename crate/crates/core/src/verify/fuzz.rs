//! Seeded random-instance checks.
//!
//! Trial `t` of dimension index `k` draws from stream `(k << 32) | t` of the
//! run seed, so any reported instance can be regenerated on its own.

use serde::{Deserialize, Serialize};

use crate::bounds::{prop3_report_with, Tolerances};
use crate::entropy::{alpha_log, quantum_tsallis, EntropyOrder};
use crate::error::{Error, Result};
use crate::qubit::{self, BlochVector, QubitObservable, QubitState};
use crate::qudit::{self, QuditObservable, QuditState};
use crate::scenario::{qubit_scenario1_closed_form, qubit_scenario2_closed_form, scenario1, scenario1_quantum_sides, scenario2};

use super::sampling::{haar_observable, positive_ginibre_state, qubit_state_in_ball, rng_for, spin_observable};
use super::{CheckKind, Instance, MatrixRecord, Violation, VIOLATION_TOL};

/// Orders used when a check runs over "the α grid".
pub const ALPHA_GRID: [f64; 7] = [0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0];

/// Smallest eigenvalue accepted for "strictly positive" random states.
pub const POSITIVE_STATE_FLOOR: f64 = 1e-3;

fn stream_id(block: usize, trial: usize) -> u64 {
    ((block as u64) << 32) | trial as u64
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    Ok(())
}

fn orders(alphas: &[f64]) -> Result<Vec<EntropyOrder>> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("alpha list is empty".into()));
    }
    alphas.iter().map(|&a| EntropyOrder::new(a)).collect()
}

fn qudit_instance(state: &QuditState, first: &QuditObservable, second: Option<&QuditObservable>) -> Instance {
    Instance::Qudit {
        state: MatrixRecord::from_matrix(state.matrix().inner()),
        first_basis: MatrixRecord::from_matrix(first.basis()),
        second_basis: second.map(|s| MatrixRecord::from_matrix(s.basis())),
    }
}

/// S_α(E(ρ)) - S_α(ρ).
pub fn monotonicity_margin(state: &QuditState, obs: &QuditObservable, order: EntropyOrder) -> Result<f64> {
    let after = qudit::outcome_probabilities(state, obs)?;
    Ok(quantum_tsallis(&after, order) - quantum_tsallis(&state.spectrum(), order))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    /// Sampled (state, observable) pairs.
    pub trials: usize,
    /// Inequality evaluations (pairs × orders).
    pub checks: usize,
    pub violations: Vec<Violation>,
    pub worst_margin: f64,
}

/// Samples Ginibre states and Haar observables for every dimension and
/// checks entropy nondecrease for every order. Stops at the first violation.
pub fn fuzz_monotonicity(trials: usize, dims: &[usize], alphas: &[f64], seed: u64) -> Result<FuzzReport> {
    check_trials(trials)?;
    let orders = orders(alphas)?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidConfig("dimensions must be a non-empty list of positive integers".into()));
    }
    let mut report = FuzzReport { trials: 0, checks: 0, violations: Vec::new(), worst_margin: f64::INFINITY };
    for (k, &d) in dims.iter().enumerate() {
        for t in 0..trials {
            let stream = stream_id(k, t);
            let mut rng = rng_for(seed, stream);
            let state = super::sampling::ginibre_state(d, &mut rng);
            let obs = haar_observable(d, &mut rng);
            report.trials += 1;
            for &order in &orders {
                let margin = monotonicity_margin(&state, &obs, order)?;
                report.checks += 1;
                report.worst_margin = report.worst_margin.min(margin);
                if margin < -VIOLATION_TOL {
                    let before = quantum_tsallis(&state.spectrum(), order);
                    report.violations.push(Violation {
                        check: CheckKind::Monotonicity,
                        seed,
                        stream,
                        dim: d,
                        alpha: order.alpha(),
                        observed: before + margin,
                        bound: before,
                        margin,
                        instance: qudit_instance(&state, &obs, None),
                    });
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub trials: usize,
    pub checks: usize,
    /// Instances drawn with r ⊥ p.
    pub perpendicular_instances: usize,
    pub violations: Vec<Violation>,
    /// Instances where "upper bound attained" and "|p·r| ≤ tol" disagree.
    pub saturation_mismatches: usize,
    pub worst_lower_margin: f64,
    pub worst_upper_margin: f64,
}

/// Random qubit instances against S_α(ρ) + S_α(E_Z ρ) ≤ total ≤ 2 ln_α(2).
/// Every fourth instance is projected to r ⊥ p so the upper side is attained.
pub fn fuzz_scenario1_sandwich(trials: usize, alphas: &[f64], seed: u64) -> Result<SandwichReport> {
    check_trials(trials)?;
    let orders = orders(alphas)?;
    let tol = Tolerances::default();
    let mut report = SandwichReport {
        trials,
        checks: 0,
        perpendicular_instances: 0,
        violations: Vec::new(),
        saturation_mismatches: 0,
        worst_lower_margin: f64::INFINITY,
        worst_upper_margin: f64::INFINITY,
    };
    for t in 0..trials {
        let stream = stream_id(0, t);
        let mut rng = rng_for(seed, stream);
        let mut state = qubit_state_in_ball(&mut rng);
        let (first, second) = (spin_observable(&mut rng), spin_observable(&mut rng));
        if t % 4 == 3 {
            let r = state.bloch();
            let p = first.axis();
            state = QubitState::new(r - p.scale(p.dot(r)))?;
            report.perpendicular_instances += 1;
        }
        let zero_mean = qubit::zero_mean_condition(&state, &first, tol.predicate);
        for &order in &orders {
            let total = scenario1(&state, &first, &second, order)?.total;
            let sides = scenario1_quantum_sides(&state, &first, order)?;
            report.checks += 1;
            let lower_margin = total - sides.lower;
            let upper_margin = sides.upper - total;
            report.worst_lower_margin = report.worst_lower_margin.min(lower_margin);
            report.worst_upper_margin = report.worst_upper_margin.min(upper_margin);
            if (upper_margin.abs() <= tol.saturation) != zero_mean {
                report.saturation_mismatches += 1;
            }
            for (check, margin, bound) in
                [(CheckKind::Scenario1Lower, lower_margin, sides.lower), (CheckKind::Scenario1Upper, upper_margin, sides.upper)]
            {
                if margin < -VIOLATION_TOL {
                    report.violations.push(Violation {
                        check,
                        seed,
                        stream,
                        dim: 2,
                        alpha: order.alpha(),
                        observed: total,
                        bound,
                        margin,
                        instance: Instance::Qubit {
                            bloch: state.bloch().to_array(),
                            first_axis: first.axis().to_array(),
                            second_axis: second.axis().to_array(),
                        },
                    });
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub trials: usize,
    pub alphas: Vec<f64>,
    /// Largest |Bloch pipeline - closed form| over all quantities.
    pub max_closed_form_discrepancy: f64,
    /// Largest |Bloch pipeline - 2x2 matrix pipeline| over all quantities.
    pub max_matrix_discrepancy: f64,
}

impl CrossCheckReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.max_closed_form_discrepancy.max(self.max_matrix_discrepancy)
    }
}

fn qubit_paths(state: &QubitState, first: &QubitObservable, second: &QubitObservable, order: EntropyOrder) -> Result<(f64, f64)> {
    let r3 = first.axis().dot(state.bloch());
    let mu = qubit::overlap_mu(first, second);
    let bloch = [
        scenario1(state, first, second, order)?.total,
        scenario2(state, first, second, order)?.form1,
        scenario2(state, first, second, order)?.form2,
    ];
    let (c1, c2) = qubit_scenario2_closed_form(r3, mu, order)?;
    let closed = [qubit_scenario1_closed_form(r3, mu, order)?, c1, c2];
    let (rho, p, q) = (QuditState::from_qubit(state), QuditObservable::from_qubit(first), QuditObservable::from_qubit(second));
    let two = scenario2(&rho, &p, &q, order)?;
    let matrix = [scenario1(&rho, &p, &q, order)?.total, two.form1, two.form2];
    let gap = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok((gap(&bloch, &closed), gap(&bloch, &matrix)))
}

/// Compares the Bloch pipeline, the qubit closed forms and the d = 2 matrix
/// pipeline on random instances over [`ALPHA_GRID`].
pub fn cross_check_pipelines(trials: usize, seed: u64) -> Result<CrossCheckReport> {
    cross_check_pipelines_with(trials, &ALPHA_GRID, seed)
}

pub fn cross_check_pipelines_with(trials: usize, alphas: &[f64], seed: u64) -> Result<CrossCheckReport> {
    check_trials(trials)?;
    let orders = orders(alphas)?;
    let mut report =
        CrossCheckReport { trials, alphas: alphas.to_vec(), max_closed_form_discrepancy: 0.0, max_matrix_discrepancy: 0.0 };
    for t in 0..trials {
        let mut rng = rng_for(seed, stream_id(0, t));
        let state = qubit_state_in_ball(&mut rng);
        let (first, second) = (spin_observable(&mut rng), spin_observable(&mut rng));
        for &order in &orders {
            let (closed, matrix) = qubit_paths(&state, &first, &second, order)?;
            report.max_closed_form_discrepancy = report.max_closed_form_discrepancy.max(closed);
            report.max_matrix_discrepancy = report.max_matrix_discrepancy.max(matrix);
        }
    }
    Ok(report)
}

/// Acceptance-style sampling plan for the d-dimensional certainty bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop3FuzzConfig {
    pub dims: Vec<usize>,
    pub alphas: Vec<f64>,
    /// Random strictly positive states paired with the Fourier pair.
    pub mub_states: usize,
    /// Random Haar basis pairs, each with a random strictly positive state.
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for Prop3FuzzConfig {
    fn default() -> Self {
        Self { dims: vec![2, 3, 4, 5], alphas: vec![0.5, 1.0, 2.0], mub_states: 50, random_pairs: 200, seed: 2015 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop3FuzzReport {
    pub mub_checks: usize,
    /// Fourier-pair checks with both upper bounds attained within tolerance.
    pub mub_saturated: usize,
    /// Largest |upper residual| seen on Fourier-pair instances.
    pub max_mub_residual: f64,
    pub random_checks: usize,
    /// Random-pair checks whose form-2 residual exceeds `strict_gap`.
    pub random_strict: usize,
    pub min_random_form2_residual: f64,
    pub strict_gap: f64,
    pub violations: Vec<Violation>,
}

pub fn fuzz_prop3(config: &Prop3FuzzConfig, strict_gap: f64) -> Result<Prop3FuzzReport> {
    let orders = orders(&config.alphas)?;
    let tol = Tolerances::default();
    let mut report = Prop3FuzzReport {
        mub_checks: 0,
        mub_saturated: 0,
        max_mub_residual: 0.0,
        random_checks: 0,
        random_strict: 0,
        min_random_form2_residual: f64::INFINITY,
        strict_gap,
        violations: Vec::new(),
    };
    for (k, &d) in config.dims.iter().enumerate() {
        let (z, x) = qudit::fourier_mub_pair(d)?;
        for t in 0..config.mub_states {
            let mut rng = rng_for(config.seed, stream_id(2 * k, t));
            let rho = positive_ginibre_state(d, POSITIVE_STATE_FLOOR, &mut rng);
            for &order in &orders {
                let r = prop3_report_with(&rho, &z, &x, order, tol)?;
                report.mub_checks += 1;
                report.max_mub_residual =
                    report.max_mub_residual.max(r.form1.upper_residual.abs()).max(r.form2.upper_residual.abs());
                if r.both_saturated() && r.mutually_unbiased {
                    report.mub_saturated += 1;
                }
            }
        }
        for t in 0..config.random_pairs {
            let stream = stream_id(2 * k + 1, t);
            let mut rng = rng_for(config.seed, stream);
            let rho = positive_ginibre_state(d, POSITIVE_STATE_FLOOR, &mut rng);
            let (a, b) = (haar_observable(d, &mut rng), haar_observable(d, &mut rng));
            for &order in &orders {
                let r = prop3_report_with(&rho, &a, &b, order, tol)?;
                report.random_checks += 1;
                report.min_random_form2_residual = report.min_random_form2_residual.min(r.form2.upper_residual);
                if r.form2.upper_residual > strict_gap {
                    report.random_strict += 1;
                }
                for (form, bound) in [(r.form1, r.form1.upper), (r.form2, r.form2.upper)] {
                    if form.upper_residual < -tol.saturation {
                        report.violations.push(Violation {
                            check: CheckKind::Prop3Upper,
                            seed: config.seed,
                            stream,
                            dim: d,
                            alpha: order.alpha(),
                            observed: form.quantity,
                            bound,
                            margin: form.upper_residual,
                            instance: qudit_instance(&rho, &a, Some(&b)),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Recomputes the margin of a recorded violation from its instance.
pub fn replay_margin(v: &Violation) -> Result<f64> {
    let order = EntropyOrder::new(v.alpha)?;
    match (&v.check, &v.instance) {
        (CheckKind::Monotonicity, Instance::Qudit { state, first_basis, .. }) => {
            let rho = QuditState::new(qudit::ComplexMatrix::new(state.to_matrix()?)?)?;
            let obs = QuditObservable::from_basis(first_basis.to_matrix()?)?;
            monotonicity_margin(&rho, &obs, order)
        }
        (CheckKind::Prop3Upper, Instance::Qudit { state, first_basis, second_basis: Some(second) }) => {
            let rho = QuditState::new(qudit::ComplexMatrix::new(state.to_matrix()?)?)?;
            let a = QuditObservable::from_basis(first_basis.to_matrix()?)?;
            let b = QuditObservable::from_basis(second.to_matrix()?)?;
            let r = prop3_report_with(&rho, &a, &b, order, Tolerances::default())?;
            Ok(r.form1.upper_residual.min(r.form2.upper_residual))
        }
        (CheckKind::Scenario1Lower | CheckKind::Scenario1Upper, Instance::Qubit { bloch, first_axis, second_axis }) => {
            let s = QubitState::new(BlochVector::from_array(*bloch))?;
            let p = QubitObservable::spin(BlochVector::from_array(*first_axis))?;
            let q = QubitObservable::spin(BlochVector::from_array(*second_axis))?;
            let total = scenario1(&s, &p, &q, order)?.total;
            let sides = scenario1_quantum_sides(&s, &p, order)?;
            Ok(if v.check == CheckKind::Scenario1Lower { total - sides.lower } else { sides.upper - total })
        }
        (CheckKind::SweepLower | CheckKind::SweepUpper, Instance::Sweep { kind, r_norm, mu, r3 }) => {
            let value = super::sweep::sweep_point(*kind, *r_norm, *mu, *r3, order)?;
            Ok(if v.check == CheckKind::SweepLower { value - v.bound } else { v.bound - value })
        }
        _ => Err(Error::InvalidConfig(format!("no replay for {:?} with this instance type", v.check))),
    }
}

/// 2 ln_α(2), the scenario-1 qubit ceiling.
pub fn qubit_ceiling(order: EntropyOrder) -> f64 {
    2.0 * alpha_log(2.0, order).expect("2 is positive")
}
