//! Scalar coherence quantifiers in the computational basis.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix, PhaseVector};

/// Eigenvalues below this contribute nothing to an entropy.
const ENTROPY_CUTOFF: f64 = 1e-14;
/// Negative differences down to this size are round-off and clamp to zero.
const NEGATIVE_CLAMP: f64 = 1e-9;
/// Default tolerance for [`check_phase_alignment`].
pub const ALIGNMENT_TOL: f64 = 1e-8;

/// Sum of the moduli of all off-diagonal entries.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = rho.matrix();
    let mut total = 0.0;
    for j in 0..d {
        for k in 0..d {
            if j != k {
                total += m[(j, k)].norm();
            }
        }
    }
    total
}

/// Diagonal part of `rho`.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let diag = DVector::from_iterator(rho.dim(), rho.populations().into_iter().map(|p| Complex64::new(p, 0.0)));
    DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_diagonal(&diag))
}

/// Binary entropy in bits; `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_entropy(&[x, 1.0 - x])
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > ENTROPY_CUTOFF)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// `S(Delta(rho)) - S(rho)`, in bits.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> f64 {
    let value = shannon_entropy(&rho.populations()) - von_neumann_entropy(rho);
    if value < 0.0 && value >= -NEGATIVE_CLAMP {
        0.0
    } else {
        value
    }
}

fn require_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Intrinsic randomness of a qubit in terms of its l1 coherence,
/// `H((1 + sqrt(1 - C^2)) / 2)`.
pub fn qubit_intrinsic_randomness(rho: &DensityMatrix) -> Result<f64> {
    require_qubit(rho)?;
    let c = l1_coherence(rho).min(1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0))
}

/// Robustness of coherence of a qubit, which coincides with its l1 coherence.
pub fn qubit_robustness(rho: &DensityMatrix) -> Result<f64> {
    require_qubit(rho)?;
    Ok(l1_coherence(rho))
}

/// Representative of an angle in `(-pi, pi]`.
pub fn principal_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    pub aligned: bool,
    /// Phases realizing `e^{i(theta_j - theta_k)} = rho_jk / |rho_jk|` when aligned.
    pub witness: Option<PhaseVector>,
    /// Largest modular mismatch over all non-zero off-diagonal entries.
    pub max_mismatch: f64,
}

/// Decides whether phases `theta_j` exist with `theta_j - theta_k = arg rho_jk`
/// for every off-diagonal entry of modulus above `tol`.
///
/// Phases are propagated breadth-first over the graph of non-zero entries, one
/// root per connected component; the remaining edges are then checked.
pub fn check_phase_alignment(rho: &DensityMatrix, tol: f64) -> AlignmentReport {
    let d = rho.dim();
    let m = rho.matrix();
    let edge = |j: usize, k: usize| j != k && m[(j, k)].norm() > tol;

    let mut theta = vec![0.0; d];
    let mut seen = vec![false; d];
    let mut queue = VecDeque::new();
    for root in 0..d {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(j) = queue.pop_front() {
            for k in 0..d {
                if !seen[k] && edge(j, k) {
                    theta[k] = theta[j] - m[(j, k)].arg();
                    seen[k] = true;
                    queue.push_back(k);
                }
            }
        }
    }

    let mut max_mismatch: f64 = 0.0;
    for j in 0..d {
        for k in (j + 1)..d {
            if edge(j, k) {
                let mismatch = principal_angle(theta[j] - theta[k] - m[(j, k)].arg()).abs();
                max_mismatch = max_mismatch.max(mismatch);
            }
        }
    }
    let aligned = max_mismatch <= tol;
    AlignmentReport {
        aligned,
        witness: aligned.then(|| PhaseVector::canonical(&theta)),
        max_mismatch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{
        complex_matrix, maximally_coherent_state, random_density_matrix, random_pure_state, real_matrix,
        seeded_rng, tensor, PureState,
    };
    use crate::families::{qutrit_counterexample, random_incoherent_unitary, random_x_state, two_qubit_family};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn l1_examples() {
        let inc = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert_eq!(l1_coherence(&inc), 0.0);
        for d in 2..=6 {
            let mcs = maximally_coherent_state(&PhaseVector::zeros(d)).to_density();
            assert_abs_diff_eq!(l1_coherence(&mcs), (d - 1) as f64, epsilon = 1e-12);
        }
        for &p in &[0.0, 0.25, 0.5, 1.0] {
            assert_abs_diff_eq!(l1_coherence(&two_qubit_family(p)), 1.0 + 2.0 * p, epsilon = 1e-12);
        }
    }

    #[test]
    fn dephase_examples() {
        let plus = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap();
        assert_eq!(dephase(&plus), DensityMatrix::maximally_mixed(2));
        let diag = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(dephase(&diag), diag);
        let rho = DensityMatrix::new(real_matrix(2, 2, &[0.75, 0.3536, 0.3536, 0.25]).unwrap()).unwrap();
        assert_eq!(dephase(&rho), DensityMatrix::diagonal(&[0.75, 0.25]).unwrap());
        assert_eq!(dephase(&dephase(&rho)), dephase(&rho));
    }

    #[test]
    fn relative_entropy_examples() {
        let plus = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap();
        assert_abs_diff_eq!(relative_entropy_coherence(&plus), 1.0, epsilon = 1e-12);
        assert_eq!(relative_entropy_coherence(&DensityMatrix::maximally_mixed(2)), 0.0);
        let q = maximally_coherent_state(&PhaseVector::zeros(3)).to_density();
        assert_abs_diff_eq!(relative_entropy_coherence(&q), 3f64.log2(), epsilon = 1e-10);
    }

    #[test]
    fn randomness_and_robustness_examples() {
        let inc = DensityMatrix::diagonal(&[0.4, 0.6]).unwrap();
        assert_eq!(qubit_intrinsic_randomness(&inc).unwrap(), 0.0);
        let plus = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap();
        assert_abs_diff_eq!(qubit_intrinsic_randomness(&plus).unwrap(), 1.0, epsilon = 1e-12);
        let rho = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.3, 0.3, 0.5]).unwrap()).unwrap();
        // H(0.9) by direct evaluation
        let h09 = -0.9 * 0.9f64.log2() - 0.1 * 0.1f64.log2();
        assert_abs_diff_eq!(qubit_intrinsic_randomness(&rho).unwrap(), h09, epsilon = 1e-12);
        assert_abs_diff_eq!(h09, 0.468996, epsilon = 1e-6);

        assert_abs_diff_eq!(qubit_robustness(&plus).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(qubit_robustness(&DensityMatrix::diagonal(&[0.3, 0.7]).unwrap()).unwrap(), 0.0);
        let rho = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.2, 0.2, 0.5]).unwrap()).unwrap();
        assert_abs_diff_eq!(qubit_robustness(&rho).unwrap(), 0.4, epsilon = 1e-15);

        let qutrit = DensityMatrix::maximally_mixed(3);
        assert!(matches!(qubit_robustness(&qutrit), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(qubit_intrinsic_randomness(&qutrit), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn alignment_examples() {
        // nonnegative entries
        let rho = DensityMatrix::new(real_matrix(3, 3, &[0.4, 0.1, 0.2, 0.1, 0.3, 0.05, 0.2, 0.05, 0.3]).unwrap()).unwrap();
        let rep = check_phase_alignment(&rho, ALIGNMENT_TOL);
        assert!(rep.aligned);
        assert!(rep.witness.unwrap().angles().iter().all(|&a| a == 0.0));

        let mut rng = seeded_rng(3);
        for _ in 0..20 {
            assert!(check_phase_alignment(&random_x_state(4, &mut rng), ALIGNMENT_TOL).aligned);
        }

        let rep = check_phase_alignment(&qutrit_counterexample(0.5), ALIGNMENT_TOL);
        assert!(!rep.aligned);
        assert!(rep.witness.is_none());
        assert!(rep.max_mismatch > 1e-3);
    }

    #[test]
    fn alignment_witness_reproduces_phases() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![c(s, 0.0), c(0.0, s)]).unwrap().to_density();
        let rep = check_phase_alignment(&psi, ALIGNMENT_TOL);
        let w = rep.witness.unwrap();
        // e^{i(theta_0 - theta_1)} = rho_01 / |rho_01| = -i
        let z = Complex64::from_polar(1.0, w.angles()[0] - w.angles()[1]);
        assert_abs_diff_eq!(z.im, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn alignment_ignores_zero_entries() {
        let rho = DensityMatrix::new(
            complex_matrix(
                3,
                3,
                &[c(0.5, 0.0), c(0.0, 0.2), c(0.0, 0.0), c(0.0, -0.2), c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.2, 0.0)],
            )
            .unwrap(),
        )
        .unwrap();
        assert!(check_phase_alignment(&rho, ALIGNMENT_TOL).aligned);
        assert!(check_phase_alignment(&DensityMatrix::maximally_mixed(4), ALIGNMENT_TOL).aligned);
    }

    #[test]
    fn pure_states_always_aligned() {
        for seed in 0..200 {
            let d = 2 + (seed as usize % 5);
            let rho = random_pure_state(d, seed).to_density();
            assert!(check_phase_alignment(&rho, ALIGNMENT_TOL).aligned, "seed {seed}");
        }
    }

    #[test]
    fn l1_bounds_and_incoherent_unitary_invariance() {
        let mut rng = seeded_rng(17);
        for seed in 0..200 {
            let d = 2 + (seed as usize % 4);
            let rho = random_density_matrix(d, seed);
            let l1 = l1_coherence(&rho);
            assert!((0.0..=(d - 1) as f64 + 1e-12).contains(&l1));
            let u = random_incoherent_unitary(d, &mut rng);
            let rotated = rho.conjugate_by(&u).unwrap();
            assert_abs_diff_eq!(l1_coherence(&rotated), l1, epsilon = 1e-10);
        }
    }

    #[test]
    fn relative_entropy_nonnegative_and_zero_on_diagonal() {
        for seed in 0..200 {
            let d = 2 + (seed as usize % 4);
            let rho = random_density_matrix(d, seed);
            assert!(relative_entropy_coherence(&rho) >= 0.0);
            assert!(relative_entropy_coherence(&dephase(&rho)).abs() < 1e-12);
        }
    }

    #[test]
    fn l1_subadditive_over_marginals() {
        use crate::qcore::{partial_trace, Subsystem};
        for seed in 0..300 {
            let rho = random_density_matrix(4, seed);
            let a = partial_trace(&rho, (2, 2), Subsystem::First).unwrap();
            let b = partial_trace(&rho, (2, 2), Subsystem::Second).unwrap();
            assert!(l1_coherence(&a) + l1_coherence(&b) <= l1_coherence(&rho) + 1e-9, "seed {seed}");
        }
        let plus = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap();
        let pp = tensor(&plus, &plus);
        assert_abs_diff_eq!(l1_coherence(&pp), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn principal_angle_range() {
        assert_eq!(principal_angle(PI), PI);
        assert_abs_diff_eq!(principal_angle(-PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(principal_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(principal_angle(TAU + 0.1), 0.1, epsilon = 1e-12);
    }
}
