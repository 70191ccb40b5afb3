//! Validated complex-matrix and quantum-state primitives.
//!
//! All states here are expressed in the fixed computational basis. Bipartite
//! indices follow the Kronecker convention `|kl> -> k * d2 + l`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense complex matrix, stored by nalgebra.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Tolerance for Hermiticity, trace and positivity checks on density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on the Euclidean norm of pure-state amplitudes.
pub const PURE_NORM_TOL: f64 = 1e-12;

/// Builds a matrix from row-major entries.
pub fn complex_matrix(rows: usize, cols: usize, entries: &[Complex64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::ShapeMismatch {
            rows,
            cols,
            found: entries.len(),
        });
    }
    Ok(DMatrix::from_row_slice(rows, cols, entries))
}

/// Builds a matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> Result<ComplexMatrix> {
    let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    complex_matrix(rows, cols, &entries)
}

pub(crate) fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    // symmetrize so round-off asymmetry does not leak into the eigensolver
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// A d x d Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` as a state. The trace is checked, never renormalized.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        let worst = max_abs_diff(&matrix, &matrix.adjoint());
        if worst > STATE_TOL {
            return Err(Error::NotHermitian { worst });
        }
        let tr = matrix.trace();
        let deviation = (tr - Complex64::new(1.0, 0.0)).norm();
        if deviation > STATE_TOL {
            return Err(Error::TraceNotOne {
                re: tr.re,
                im: tr.im,
                deviation,
            });
        }
        let min_eigenvalue = hermitian_eigenvalues(&matrix)[0];
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// The maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Self { matrix: m }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let v = DVector::from_iterator(probs.len(), probs.iter().map(|&p| Complex64::new(p, 0.0)));
        Self::new(ComplexMatrix::from_diagonal(&v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Real diagonal (populations).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Conjugation U rho U^dag. `unitary` is assumed unitary.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.shape() != self.matrix.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: unitary.nrows(),
            });
        }
        Self::new(unitary * &self.matrix * unitary.adjoint())
    }

    /// Convex combination `(1 - weight) * self + weight * other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::OutOfRange {
                name: "weight",
                value: weight,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let m = &self.matrix * Complex64::new(1.0 - weight, 0.0)
            + &other.matrix * Complex64::new(weight, 0.0);
        Self::new(m)
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm_sqr - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Rescales `amplitudes` to unit norm. Fails only on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(Self {
            amplitudes: DVector::from_iterator(
                amplitudes.len(),
                amplitudes.into_iter().map(|a| a / norm),
            ),
        })
    }

    /// Computational basis state |index>.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// |psi><psi|.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(&self.amplitudes * self.amplitudes.adjoint())
    }

    /// Kronecker product |a> (x) |b>.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }
}

/// Phases `theta_j` of a maximally coherent state, with `theta_0 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    angles: Vec<f64>,
}

/// Maps an angle to `[0, 2pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl PhaseVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (index, &value) in angles.iter().enumerate() {
            let ok = if index == 0 {
                value == 0.0
            } else {
                (0.0..TAU).contains(&value)
            };
            if !ok {
                return Err(Error::InvalidPhase { index, value });
            }
        }
        Ok(Self { angles })
    }

    /// Removes the global phase and wraps every angle.
    pub fn canonical(angles: &[f64]) -> Self {
        let offset = angles.first().copied().unwrap_or(0.0);
        let angles = angles
            .iter()
            .enumerate()
            .map(|(i, &a)| if i == 0 { 0.0 } else { wrap_angle(a - offset) })
            .collect();
        Self { angles }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            angles: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Unit-modulus coefficients `e^{i theta_j}`.
    pub fn phasors(&self) -> Vec<Complex64> {
        self.angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
    }
}

/// The state `(1/sqrt d) sum_j e^{i theta_j} |j>`.
pub fn maximally_coherent_state(phases: &PhaseVector) -> PureState {
    let scale = 1.0 / (phases.dim() as f64).sqrt();
    PureState {
        amplitudes: DVector::from_iterator(
            phases.dim(),
            phases.angles().iter().map(|&t| Complex64::from_polar(scale, t)),
        ),
    }
}

pub fn make_density_matrix(entries: ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(entries)
}

pub fn pure_to_density(psi: &PureState) -> DensityMatrix {
    psi.to_density()
}

/// Kronecker product, index `(k, l) -> k * d2 + l`.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(a.matrix().kronecker(b.matrix()))
}

/// Which factor of a bipartite system survives the partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

pub fn partial_trace(
    rho_ab: &DensityMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityMatrix> {
    let (d1, d2) = dims;
    if d1 == 0 || d2 == 0 || rho_ab.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: rho_ab.dim(),
        });
    }
    let m = rho_ab.matrix();
    let out = match keep {
        Subsystem::First => ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|l| m[(i * d2 + l, j * d2 + l)]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
    };
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Seeded generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state drawn from `rng`.
pub fn sample_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Hilbert-Schmidt random state `G G^dag / tr(G G^dag)` drawn from `rng`.
pub fn sample_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let mut m = w / Complex64::new(tr, 0.0);
    // exact Hermiticity
    for i in 0..dim {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..dim {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    DensityMatrix::from_matrix_unchecked(m)
}

pub fn random_pure_state(dim: usize, seed: u64) -> PureState {
    sample_pure_state(dim, &mut seeded_rng(seed))
}

pub fn random_density_matrix(dim: usize, seed: u64) -> DensityMatrix {
    sample_density_matrix(dim, &mut seeded_rng(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap()
    }

    #[test]
    fn accepts_basis_and_plus_states() {
        assert!(make_density_matrix(real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap()).is_ok());
        assert!(make_density_matrix(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).is_ok());
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        // eigenvalues 1.1 and -0.1
        let err = make_density_matrix(real_matrix(2, 2, &[0.5, 0.6, 0.6, 0.5]).unwrap()).unwrap_err();
        match err {
            Error::NotPositive { min_eigenvalue } => assert_abs_diff_eq!(min_eigenvalue, -0.1, epsilon = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_hermitian_and_bad_trace() {
        let m = complex_matrix(2, 2, &[c(0.5, 0.0), c(0.1, 0.1), c(0.1, 0.1), c(0.5, 0.0)]).unwrap();
        assert!(matches!(make_density_matrix(m), Err(Error::NotHermitian { .. })));
        let m = real_matrix(2, 2, &[0.6, 0.0, 0.0, 0.6]).unwrap();
        assert!(matches!(make_density_matrix(m), Err(Error::TraceNotOne { .. })));
        let m = real_matrix(2, 3, &[0.0; 6]).unwrap();
        assert!(matches!(make_density_matrix(m), Err(Error::NotSquare { .. })));
        assert!(matches!(complex_matrix(2, 2, &[c(1.0, 0.0)]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn pure_to_density_examples() {
        let zero = PureState::basis(2, 0).to_density();
        assert_eq!(zero.get(0, 0), c(1.0, 0.0));
        assert_eq!(zero.get(1, 1), c(0.0, 0.0));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = pure_to_density(&PureState::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap());
        for z in plus.matrix().iter() {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }

        let plus_i = pure_to_density(&PureState::new(vec![c(s, 0.0), c(0.0, s)]).unwrap());
        assert_abs_diff_eq!(plus_i.get(0, 1).im, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(plus_i.get(1, 0).im, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(plus_i.get(0, 0).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn maximally_coherent_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = maximally_coherent_state(&PhaseVector::zeros(2));
        assert_abs_diff_eq!(psi.amplitudes()[1].re, s, epsilon = 1e-15);

        let psi = maximally_coherent_state(&PhaseVector::zeros(3));
        for a in psi.amplitudes().iter() {
            assert_abs_diff_eq!(a.re, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        }

        let psi = maximally_coherent_state(&PhaseVector::new(vec![0.0, std::f64::consts::PI]).unwrap());
        assert_abs_diff_eq!(psi.amplitudes()[1].re, -s, epsilon = 1e-15);
        assert_abs_diff_eq!(psi.amplitudes()[1].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phase_vector_validation() {
        assert!(PhaseVector::new(vec![0.1, 0.0]).is_err());
        assert!(PhaseVector::new(vec![0.0, TAU]).is_err());
        assert!(PhaseVector::new(vec![0.0, -0.1]).is_err());
        let p = PhaseVector::canonical(&[1.0, 0.5, 7.0]);
        assert_eq!(p.angles()[0], 0.0);
        assert_abs_diff_eq!(p.angles()[1], TAU - 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p.angles()[2], 6.0, epsilon = 1e-12);
        assert!(PhaseVector::new(p.angles().to_vec()).is_ok());
        assert_eq!(wrap_angle(-1e-300), 0.0);
    }

    #[test]
    fn tensor_examples() {
        let zero = PureState::basis(2, 0).to_density();
        let t = tensor(&zero, &zero);
        assert_eq!(t.dim(), 4);
        assert_eq!(t.get(0, 0), c(1.0, 0.0));
        assert_eq!(t.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);

        let pp = tensor(&plus(), &plus());
        for z in pp.matrix().iter() {
            assert_abs_diff_eq!(z.re, 0.25, epsilon = 1e-15);
        }

        let mixed = DensityMatrix::maximally_mixed(2);
        let t = tensor(&mixed, &plus());
        for i in 0..4 {
            for j in 0..4 {
                let same_block = i / 2 == j / 2;
                let want = if same_block { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(t.get(i, j).re, want, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = PureState::new(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])
            .unwrap()
            .to_density();
        let a = partial_trace(&phi_plus, (2, 2), Subsystem::First).unwrap();
        assert!(max_abs_diff(a.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        let pp = tensor(&plus(), &plus());
        let b = partial_trace(&pp, (2, 2), Subsystem::Second).unwrap();
        assert!(max_abs_diff(b.matrix(), plus().matrix()) < 1e-15);

        assert!(matches!(
            partial_trace(&pp, (2, 3), Subsystem::First),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_then_trace_recovers_factors() {
        for seed in 0..50 {
            let a = random_density_matrix(2, seed);
            let b = random_density_matrix(3, seed + 1000);
            let ab = tensor(&a, &b);
            let ra = partial_trace(&ab, (2, 3), Subsystem::First).unwrap();
            let rb = partial_trace(&ab, (2, 3), Subsystem::Second).unwrap();
            assert!(max_abs_diff(ra.matrix(), a.matrix()) < 1e-12);
            assert!(max_abs_diff(rb.matrix(), b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn random_pure_state_is_deterministic_and_haar_marginal() {
        assert_eq!(random_pure_state(2, 7), random_pure_state(2, 7));
        let psi = random_pure_state(3, 11);
        let n: f64 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);

        let mut rng = seeded_rng(2024);
        let mean = (0..10_000)
            .map(|_| sample_pure_state(2, &mut rng).amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn random_density_matrix_validates() {
        for seed in 0..200 {
            for d in 2..=5 {
                let rho = random_density_matrix(d, seed);
                assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
            }
        }
        assert_eq!(random_density_matrix(3, 5), random_density_matrix(3, 5));
        let mut rng = seeded_rng(99);
        let mean = (0..10_000)
            .map(|_| sample_density_matrix(2, &mut rng).purity())
            .sum::<f64>()
            / 10_000.0;
        assert!(mean > 0.5 && mean < 1.0, "mean purity {mean}");
    }

    #[test]
    fn projector_is_idempotent_and_mcs_diagonal_uniform() {
        for seed in 0..30 {
            let d = 2 + (seed as usize % 4);
            let rho = random_pure_state(d, seed).to_density();
            let sq = rho.matrix() * rho.matrix();
            assert!(max_abs_diff(&sq, rho.matrix()) < 1e-10);

            let mut rng = seeded_rng(seed + 500);
            let angles: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * TAU).collect();
            let phases = PhaseVector::canonical(&angles);
            let mcs = maximally_coherent_state(&phases).to_density();
            for p in mcs.populations() {
                assert_abs_diff_eq!(p, 1.0 / d as f64, epsilon = 1e-12);
            }
        }
    }
}
