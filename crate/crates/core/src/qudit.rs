//! d-dimensional density matrices and non-degenerate observables.
//!
//! An observable is stored as its orthonormal eigenbasis (one column per
//! eigenvector) plus distinct eigenvalues, so every projector is rank one.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::entropy::ProbabilityDistribution;
use crate::error::{Error, Result};
use crate::qubit::{BlochVector, QubitObservable, QubitState};

/// Tolerance for Hermiticity, trace, positivity and orthonormality checks.
pub const MATRIX_TOL: f64 = 1e-10;

/// A finite square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidState(format!("matrix is {}x{}, expected square", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidState("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    /// Row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d || re.iter().chain(im).any(|row| row.len() != d) {
            return Err(Error::InvalidState("real and imaginary parts must both be d x d".into()));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| Complex64::new(re[i][j], im[i][j])))
    }

    pub fn to_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let d = self.dim();
        let part = |f: fn(&Complex64) -> f64| (0..d).map(|i| (0..d).map(|j| f(&self.0[(i, j)])).collect()).collect();
        (part(|z| z.re), part(|z| z.im))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// A d-dimensional density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    matrix: ComplexMatrix,
}

impl QuditState {
    /// Validates Hermiticity, unit trace and positivity to [`MATRIX_TOL`];
    /// the stored matrix is the Hermitian part rescaled to exact unit trace.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let m = matrix.into_inner();
        let adj = m.adjoint();
        let skew = max_abs_diff(&m, &adj);
        if skew > MATRIX_TOL {
            return Err(Error::InvalidState(format!("matrix is not Hermitian (deviation {skew:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > MATRIX_TOL || tr.im.abs() > MATRIX_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let herm = (&m + &adj).unscale(2.0 * tr.re);
        let min = SymmetricEigen::new(herm.clone()).eigenvalues.min();
        if min < -MATRIX_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix: ComplexMatrix(herm) })
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidState("dimension must be positive".into()));
        }
        Ok(Self { matrix: ComplexMatrix(DMatrix::identity(d, d).unscale(d as f64)) })
    }

    /// |ψ⟩⟨ψ| for a nonzero vector, normalized first.
    pub fn pure(psi: &DVector<Complex64>) -> Result<Self> {
        let n = psi.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState("pure state vector is zero".into()));
        }
        let v = psi.unscale(n);
        Self::new(ComplexMatrix::new(&v * v.adjoint())?)
    }

    /// Σ_i w_i |b_i⟩⟨b_i| in the eigenbasis of `obs`.
    pub fn diagonal_in(obs: &QuditObservable, weights: &[f64]) -> Result<Self> {
        if weights.len() != obs.dim() {
            return Err(Error::DimensionMismatch { expected: obs.dim(), found: weights.len() });
        }
        let d = obs.dim();
        let mut m = DMatrix::zeros(d, d);
        for (i, &w) in weights.iter().enumerate() {
            let b = obs.basis.column(i);
            m += (b * b.adjoint()).scale(w);
        }
        Self::new(ComplexMatrix::new(m)?)
    }

    /// (1 + r·σ)/2.
    pub fn from_qubit(state: &QubitState) -> Self {
        let r = state.bloch();
        let c = Complex64::new;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5 * (1.0 + r.r3), 0.0), c(0.5 * r.r1, -0.5 * r.r2), c(0.5 * r.r1, 0.5 * r.r2), c(0.5 * (1.0 - r.r3), 0.0)],
        );
        Self { matrix: ComplexMatrix(m) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.matrix.0.clone()).eigenvalues.iter().copied().collect()
    }

    /// The spectrum as a distribution; rounding negatives are clamped to 0.
    pub fn spectrum(&self) -> ProbabilityDistribution {
        let mut eig = self.eigenvalues();
        eig.sort_by(|a, b| b.total_cmp(a));
        let labels = (0..eig.len()).map(|i| i as f64).collect();
        ProbabilityDistribution::from_weights(eig, labels, MATRIX_TOL).expect("validated density matrix")
    }

    pub fn purity(&self) -> f64 {
        let m = &self.matrix.0;
        m.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// A non-degenerate observable: orthonormal eigenvectors (matrix columns)
/// and pairwise distinct eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditObservable {
    basis: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
}

impl QuditObservable {
    pub fn new(basis: DMatrix<Complex64>, eigenvalues: Vec<f64>) -> Result<Self> {
        let d = basis.nrows();
        if d == 0 || !basis.is_square() {
            return Err(Error::InvalidObservable(format!("basis is {}x{}", basis.nrows(), basis.ncols())));
        }
        if eigenvalues.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: eigenvalues.len() });
        }
        if eigenvalues.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidObservable("non-finite eigenvalue".into()));
        }
        for i in 0..d {
            if eigenvalues[..i].contains(&eigenvalues[i]) {
                return Err(Error::InvalidObservable(format!("eigenvalue {} is degenerate", eigenvalues[i])));
            }
        }
        let gram = basis.adjoint() * &basis;
        let dev = max_abs_diff(&gram, &DMatrix::identity(d, d));
        if dev.is_nan() || dev > MATRIX_TOL {
            return Err(Error::InvalidObservable(format!("basis is not orthonormal (deviation {dev:e})")));
        }
        Ok(Self { basis, eigenvalues })
    }

    /// Basis with default eigenvalues 0, 1, ..., d-1.
    pub fn from_basis(basis: DMatrix<Complex64>) -> Result<Self> {
        let d = basis.ncols();
        Self::new(basis, (0..d).map(|i| i as f64).collect())
    }

    pub fn computational(d: usize) -> Result<Self> {
        Self::from_basis(DMatrix::identity(d, d))
    }

    /// Discrete-Fourier basis, vector k has entries e^{2πi jk/d}/√d.
    pub fn fourier(d: usize) -> Result<Self> {
        let s = 1.0 / (d as f64).sqrt();
        let basis = DMatrix::from_fn(d, d, |j, k| {
            let phase = std::f64::consts::TAU * ((j * k) % d) as f64 / d as f64;
            Complex64::from_polar(s, phase)
        });
        Self::from_basis(basis)
    }

    /// Eigenbasis of p·σ in the order (+1, -1), carrying the observable's
    /// eigenvalues.
    pub fn from_qubit(obs: &QubitObservable) -> Self {
        let p = obs.axis();
        let c = Complex64::new;
        // Pick the better conditioned of the two closed-form eigenvectors.
        let (a, b) = if p.r3 >= 0.0 {
            let n = (2.0 * (1.0 + p.r3)).sqrt();
            (c((1.0 + p.r3) / n, 0.0), c(p.r1 / n, p.r2 / n))
        } else {
            let n = (2.0 * (1.0 - p.r3)).sqrt();
            (c(p.r1 / n, -p.r2 / n), c((1.0 - p.r3) / n, 0.0))
        };
        let basis = DMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()]);
        let (plus, minus) = obs.eigenvalues();
        Self { basis, eigenvalues: vec![plus, minus] }
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> DVector<Complex64> {
        self.basis.column(i).into_owned()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Σ_z z |z⟩⟨z|.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(d, self.eigenvalues.iter().map(|&e| Complex64::new(e, 0.0))));
        &self.basis * diag * self.basis.adjoint()
    }
}

/// v·σ as a 2x2 matrix.
pub fn pauli_dot(v: BlochVector) -> DMatrix<Complex64> {
    let c = Complex64::new;
    DMatrix::from_row_slice(2, 2, &[c(v.r3, 0.0), c(v.r1, -v.r2), c(v.r1, v.r2), c(-v.r3, 0.0)])
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// ⟨z|ρ|z⟩ for every eigenvector of `obs`.
pub fn outcome_probabilities(state: &QuditState, obs: &QuditObservable) -> Result<ProbabilityDistribution> {
    check_dims(obs.dim(), state.dim())?;
    let rho = state.matrix.inner();
    let weights = (0..obs.dim())
        .map(|i| {
            let z = obs.basis.column(i);
            z.dotc(&(rho * z)).re
        })
        .collect();
    ProbabilityDistribution::from_weights(weights, obs.eigenvalues.clone(), MATRIX_TOL)
}

/// Σ_z P_z ρ P_z.
pub fn dephase_channel_d(state: &QuditState, obs: &QuditObservable) -> Result<QuditState> {
    let p = outcome_probabilities(state, obs)?;
    let d = obs.dim();
    let mut m = DMatrix::zeros(d, d);
    for (i, &w) in p.probs().iter().enumerate() {
        let z = obs.basis.column(i);
        m += (z * z.adjoint()).scale(w);
    }
    // Hermitian with unit trace by construction.
    let herm = (&m + m.adjoint()).unscale(2.0);
    Ok(QuditState { matrix: ComplexMatrix(herm) })
}

/// Rows p(x|z) = |⟨x|z⟩|², one row per eigenvector z of `first`.
pub fn conditional_probabilities_d(first: &QuditObservable, second: &QuditObservable) -> Result<Vec<ProbabilityDistribution>> {
    check_dims(first.dim(), second.dim())?;
    let overlaps = second.basis.adjoint() * &first.basis;
    (0..first.dim())
        .map(|z| {
            let row = (0..second.dim()).map(|x| overlaps[(x, z)].norm_sqr()).collect();
            ProbabilityDistribution::from_weights(row, second.eigenvalues.clone(), MATRIX_TOL)
        })
        .collect()
}

/// The computational basis and the discrete-Fourier basis.
pub fn fourier_mub_pair(d: usize) -> Result<(QuditObservable, QuditObservable)> {
    if d < 2 {
        return Err(Error::Domain(format!("mutually unbiased pair needs d >= 2, got {d}")));
    }
    Ok((QuditObservable::computational(d)?, QuditObservable::fourier(d)?))
}

/// Every |⟨x|z⟩|² lies within `tol` of 1/d.
pub fn is_mub_pair(first: &QuditObservable, second: &QuditObservable, tol: f64) -> Result<bool> {
    check_dims(first.dim(), second.dim())?;
    let target = 1.0 / first.dim() as f64;
    let overlaps = second.basis.adjoint() * &first.basis;
    Ok(overlaps.iter().all(|o| (o.norm_sqr() - target).abs() <= tol))
}

/// Smallest eigenvalue of ρ is at least `tol`.
pub fn strictly_positive(state: &QuditState, tol: f64) -> bool {
    state.eigenvalues().into_iter().fold(f64::INFINITY, f64::min) >= tol
}
