//! Seeded random instances.
//!
//! Every generator draws from a ChaCha8 stream keyed by `(seed, stream)`, so
//! trial `i` of a run uses stream `i` and can be replayed in isolation.
//! Unit Bloch vectors are normalized standard Gaussians, states inside the
//! ball take radius u^(1/3), d-dimensional states are Ginibre GG†/Tr and
//! bases are Haar unitaries from a phase-corrected QR.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::qubit::{BlochVector, QubitObservable, QubitState};
use crate::qudit::{ComplexMatrix, QuditObservable, QuditState};

pub type TrialRng = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn unit_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v = BlochVector::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            return v.scale(1.0 / n);
        }
    }
}

/// Uniform in the Bloch ball.
pub fn qubit_state_in_ball<R: Rng + ?Sized>(rng: &mut R) -> QubitState {
    let radius = rng.random::<f64>().cbrt();
    QubitState::new(unit_bloch(rng).scale(radius)).expect("inside the ball")
}

pub fn qubit_state_with_norm<R: Rng + ?Sized>(rng: &mut R, norm: f64) -> QubitState {
    QubitState::new(unit_bloch(rng).scale(norm)).expect("norm at most 1")
}

pub fn spin_observable<R: Rng + ?Sized>(rng: &mut R) -> QubitObservable {
    QubitObservable::spin(unit_bloch(rng)).expect("unit axis")
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

/// GG†/Tr(GG†).
pub fn ginibre_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> QuditState {
    let g = ginibre_matrix(d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    QuditState::new(ComplexMatrix::new(m.unscale(tr)).expect("finite")).expect("Ginibre state is a density matrix")
}

/// Ginibre state whose smallest eigenvalue is at least `floor`.
pub fn positive_ginibre_state<R: Rng + ?Sized>(d: usize, floor: f64, rng: &mut R) -> QuditState {
    loop {
        let s = ginibre_state(d, rng);
        if crate::qudit::strictly_positive(&s, floor) {
            return s;
        }
    }
}

pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = ginibre_matrix(d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

pub fn haar_observable<R: Rng + ?Sized>(d: usize, rng: &mut R) -> QuditObservable {
    QuditObservable::from_basis(haar_unitary(d, rng)).expect("unitary columns are orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::max_abs_diff;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| rng_for(5, 3).random()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = rng_for(5, 3).random();
        let y: u64 = rng_for(5, 4).random();
        assert_ne!(x, y);
    }

    #[test]
    fn generators_produce_valid_objects() {
        let mut rng = rng_for(1, 0);
        for d in 1..=5 {
            let u = haar_unitary(d, &mut rng);
            assert!(max_abs_diff(&(u.adjoint() * &u), &DMatrix::identity(d, d)) < 1e-12);
            let s = positive_ginibre_state(d, 1e-3, &mut rng);
            assert!(crate::qudit::strictly_positive(&s, 1e-3));
        }
        for _ in 0..100 {
            assert!((unit_bloch(&mut rng).norm() - 1.0).abs() < 1e-14);
            assert!(qubit_state_in_ball(&mut rng).bloch().norm() <= 1.0);
            assert!((qubit_state_with_norm(&mut rng, 0.7).bloch().norm() - 0.7).abs() < 1e-14);
        }
    }
}
