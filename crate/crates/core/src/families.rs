//! Named states and seeded random state families used by the verification suites.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qcore::{sample_density_matrix, tensor, ComplexMatrix, DensityMatrix, PureState};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// |+> = (|0> + |1>) / sqrt 2.
pub fn plus_state() -> PureState {
    PureState::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).expect("nonzero")
}

/// |Phi+> = (|00> + |11>) / sqrt 2.
pub fn bell_phi_plus() -> PureState {
    PureState::normalized(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).expect("nonzero")
}

/// `p |++><++| + (1 - p) |Phi+><Phi+|`.
pub fn two_qubit_family(p: f64) -> DensityMatrix {
    let plus = plus_state().to_density();
    let pp = tensor(&plus, &plus);
    bell_phi_plus().to_density().mix(&pp, p).expect("valid mixture")
}

/// Qutrit mixture `(1 - p)|psi><psi| + p|phi><phi|` whose coherence fraction
/// falls strictly below the l1 bound at `p = 1/2`.
pub fn qutrit_counterexample(p: f64) -> DensityMatrix {
    let s6 = 6f64.sqrt();
    let s3 = 3f64.sqrt();
    let psi = PureState::new(vec![
        c(1.0 / s6, 1.0 / s6),
        c(2f64.sqrt() / (2.0 * s3), 5f64.sqrt() / (2.0 * s3)),
        c(1.0 / (2.0 * s3), 0.0),
    ])
    .expect("normalized");
    let phi = PureState::new(vec![
        c(0.0, FRAC_1_SQRT_2),
        c(s3 / (2.0 * 2f64.sqrt()), 0.0),
        c(1.0 / (2.0 * 2f64.sqrt()), 0.0),
    ])
    .expect("normalized");
    psi.to_density().mix(&phi.to_density(), p).expect("valid mixture")
}

fn hermitize(mut m: ComplexMatrix) -> ComplexMatrix {
    let d = m.nrows();
    for i in 0..d {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..d {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    m
}

/// Random state whose entries are all real and nonnegative.
pub fn random_nonnegative_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        let x: f64 = rng.sample(StandardNormal);
        c(x.abs(), 0.0)
    });
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(hermitize(w / c(tr, 0.0))).expect("nonnegative Gram matrix is a state")
}

/// Random X state: nonzero entries only on the diagonal and anti-diagonal.
pub fn random_x_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let blocks = dim.div_ceil(2);
    let raw: Vec<f64> = (0..blocks)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            x * x + 1e-3
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (j, w) in raw.iter().map(|w| w / total).enumerate() {
        let k = dim - 1 - j;
        if j == k {
            m[(j, j)] = c(w, 0.0);
        } else {
            let block = sample_density_matrix(2, rng);
            let s = c(w, 0.0);
            m[(j, j)] = block.get(0, 0) * s;
            m[(j, k)] = block.get(0, 1) * s;
            m[(k, j)] = block.get(1, 0) * s;
            m[(k, k)] = block.get(1, 1) * s;
        }
    }
    DensityMatrix::new(hermitize(m)).expect("block-PSD X state")
}

/// Random incoherent unitary: a permutation composed with diagonal phases.
pub fn random_incoherent_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, &target) in perm.iter().enumerate() {
        let theta = rng.random::<f64>() * TAU;
        u[(target, j)] = Complex64::from_polar(1.0, theta);
    }
    u
}
