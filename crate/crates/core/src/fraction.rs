//! Coherence fraction of states.
//!
//! The coherence fraction is the largest overlap `<phi|rho|phi>` with a
//! maximally coherent state `|phi> = d^{-1/2} sum_j e^{i theta_j} |j>`. As a
//! function of the phases this is the quadratic form
//!
//! ```text
//! f(theta) = (1/d) sum_{j,k} e^{-i(theta_j - theta_k)} rho_jk
//! ```
//!
//! in unit-modulus variables. Qubits have the closed form `1/2 + |rho_01|`.
//! For `d >= 3` the maximizer is found by multi-start coordinate ascent: with
//! every phase but `theta_j` frozen, `f = a + (2/d) Re(e^{-i theta_j} c_j)` with
//! `c_j = sum_{k != j} rho_jk e^{i theta_k}`, so `theta_j = arg c_j` is the exact
//! coordinate maximizer and each update can only increase `f`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::measures::{binary_entropy, check_phase_alignment, l1_coherence, ALIGNMENT_TOL};
use crate::qcore::{partial_trace, seeded_rng, wrap_angle, DensityMatrix, PhaseVector, Subsystem};

/// Largest dimension accepted by the grid oracle.
pub const ORACLE_MAX_DIM: usize = 4;
/// Slack used when a strict inequality against `1/d` is decided.
const STRICT_SLACK: f64 = 1e-9;

/// Knobs shared by the state optimizer, the grid oracle and the channel searches.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Coordinate-ascent restarts per state (restart 0 starts at theta = 0).
    pub restarts: usize,
    /// Sweep cap per restart.
    pub max_iters: usize,
    /// Stop once a sweep improves the objective by less than this.
    pub tol: f64,
    pub seed: u64,
    /// Grid points per free angle for the brute-force oracle.
    pub grid_points: usize,
    /// Grid resolution of the one-parameter qubit channel scans.
    pub channel_grid: usize,
    /// Restarts of the pure-input searches over channel inputs.
    pub search_restarts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 500,
            tol: 1e-10,
            seed: 0,
            grid_points: 360,
            channel_grid: 720,
            search_restarts: 32,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.search_restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be >= 1"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be >= 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        if self.grid_points < 8 || self.channel_grid < 8 {
            return Err(Error::InvalidConfig("grid resolution must be >= 8"));
        }
        Ok(())
    }

    /// Oracle resolution used by default for a given dimension.
    pub fn default_oracle_grid(dim: usize) -> usize {
        if dim <= 3 {
            360
        } else {
            36
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionResult {
    pub value: f64,
    pub argmax_phases: PhaseVector,
    pub iterations_used: usize,
    pub converged: bool,
}

/// `<phi(theta)|rho|phi(theta)>`.
pub fn overlap(rho: &DensityMatrix, phases: &PhaseVector) -> f64 {
    objective(rho, &phases.phasors())
}

fn objective(rho: &DensityMatrix, z: &[Complex64]) -> f64 {
    let d = z.len();
    let m = rho.matrix();
    let mut total = 0.0;
    for j in 0..d {
        let mut row = Complex64::new(0.0, 0.0);
        for k in 0..d {
            row += m[(j, k)] * z[k];
        }
        total += (z[j].conj() * row).re;
    }
    total / d as f64
}

struct Ascent {
    value: f64,
    sweeps: usize,
    converged: bool,
}

/// Coordinate ascent on `z` in place. `observe` sees the objective after every
/// single-coordinate update. Phase 0 stays fixed.
fn ascend(
    rho: &DensityMatrix,
    z: &mut [Complex64],
    max_iters: usize,
    tol: f64,
    mut observe: impl FnMut(f64),
) -> Ascent {
    let d = z.len();
    let m = rho.matrix();
    let scale = 2.0 / d as f64;
    let mut value = objective(rho, z);
    observe(value);
    for sweep in 1..=max_iters {
        let start = value;
        for j in 1..d {
            let mut cj = Complex64::new(0.0, 0.0);
            for k in 0..d {
                if k != j {
                    cj += m[(j, k)] * z[k];
                }
            }
            let norm = cj.norm();
            if norm > 0.0 {
                let old = (z[j].conj() * cj).re;
                z[j] = cj / norm;
                value += scale * (norm - old);
                observe(value);
            }
        }
        value = objective(rho, z);
        if value - start < tol {
            return Ascent {
                value,
                sweeps: sweep,
                converged: true,
            };
        }
    }
    Ascent {
        value,
        sweeps: max_iters,
        converged: false,
    }
}

fn phases_of(z: &[Complex64]) -> PhaseVector {
    let angles: Vec<f64> = z.iter().map(|w| w.arg()).collect();
    PhaseVector::canonical(&angles)
}

fn qubit_fraction(rho: &DensityMatrix) -> FractionResult {
    let off = rho.get(0, 1);
    let theta1 = if off.norm() > 0.0 { wrap_angle(-off.arg()) } else { 0.0 };
    FractionResult {
        value: 0.5 * (rho.get(0, 0).re + rho.get(1, 1).re) + off.norm(),
        argmax_phases: PhaseVector::canonical(&[0.0, theta1]),
        iterations_used: 0,
        converged: true,
    }
}

fn start_phasors(dim: usize, restart: usize, seed: u64) -> Vec<Complex64> {
    if restart == 0 {
        return vec![Complex64::new(1.0, 0.0); dim];
    }
    let mut rng = seeded_rng(seed.wrapping_add(restart as u64));
    let mut z: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * TAU))
        .collect();
    z[0] = Complex64::new(1.0, 0.0);
    z
}

fn best_over_starts(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
    starts: impl Iterator<Item = Vec<Complex64>>,
) -> FractionResult {
    let mut best: Option<(Ascent, Vec<Complex64>)> = None;
    for mut z in starts {
        let run = ascend(rho, &mut z, cfg.max_iters, cfg.tol, |_| {});
        // strict improvement only: the earliest start wins ties
        let better = best.as_ref().is_none_or(|(b, _)| run.value > b.value);
        if better {
            best = Some((run, z));
        }
    }
    let (run, z) = best.expect("at least one start");
    FractionResult {
        value: run.value,
        argmax_phases: phases_of(&z),
        iterations_used: run.sweeps,
        converged: run.converged,
    }
}

/// Coherence fraction `max_{phi in M} <phi|rho|phi>`.
pub fn coherence_fraction(rho: &DensityMatrix, cfg: &OptimizerConfig) -> FractionResult {
    let d = rho.dim();
    match d {
        1 => FractionResult {
            value: rho.get(0, 0).re,
            argmax_phases: PhaseVector::zeros(1),
            iterations_used: 0,
            converged: true,
        },
        2 => qubit_fraction(rho),
        _ => best_over_starts(
            rho,
            cfg,
            (0..cfg.restarts.max(1)).map(|r| start_phasors(d, r, cfg.seed)),
        ),
    }
}

/// Coordinate ascent from `warm` plus the regular restarts; used when a nearby
/// maximizer is already known.
pub fn coherence_fraction_warm(
    rho: &DensityMatrix,
    warm: &PhaseVector,
    cfg: &OptimizerConfig,
    restarts: usize,
) -> FractionResult {
    let d = rho.dim();
    if d <= 2 || warm.dim() != d {
        return coherence_fraction(rho, cfg);
    }
    let starts = std::iter::once(warm.phasors())
        .chain((0..restarts).map(|r| start_phasors(d, r, cfg.seed)));
    best_over_starts(rho, cfg, starts)
}

/// Objective after every coordinate update of one ascent run from `start`.
pub fn ascent_trace(rho: &DensityMatrix, start: &PhaseVector, cfg: &OptimizerConfig) -> Vec<f64> {
    let mut z = start.phasors();
    let mut trace = Vec::new();
    ascend(rho, &mut z, cfg.max_iters, cfg.tol, |v| trace.push(v));
    trace
}

/// `1/d + C_l1(rho)/d`, attained exactly when the phases of rho are aligned.
pub fn coherence_fraction_upper_bound(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    (1.0 + l1_coherence(rho)) / d
}

/// Exhaustive maximum of the overlap over the grid `theta_j = 2 pi m / grid_points`,
/// `theta_0 = 0`.
pub fn coherence_fraction_oracle(rho: &DensityMatrix, grid_points: usize) -> Result<f64> {
    let d = rho.dim();
    if d > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            max: ORACLE_MAX_DIM,
        });
    }
    if grid_points == 0 {
        return Err(Error::InvalidConfig("grid_points must be positive"));
    }
    if d == 1 {
        return Ok(rho.get(0, 0).re);
    }
    let table: Vec<Complex64> = (0..grid_points)
        .map(|m| Complex64::from_polar(1.0, TAU * m as f64 / grid_points as f64))
        .collect();
    let mut idx = vec![0usize; d];
    let mut z = vec![Complex64::new(1.0, 0.0); d];
    let mut best = f64::NEG_INFINITY;
    loop {
        for j in 1..d {
            z[j] = table[idx[j]];
        }
        best = best.max(objective(rho, &z));
        // odometer over coordinates 1..d
        let mut j = 1;
        loop {
            if j == d {
                return Ok(best);
            }
            idx[j] += 1;
            if idx[j] < grid_points {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// For aligned states: coherent iff the coherence fraction exceeds `1/d`.
pub fn is_coherent_by_fraction(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<bool> {
    if !check_phase_alignment(rho, ALIGNMENT_TOL).aligned {
        return Err(Error::NotApplicable(
            "coherence detection by fraction requires phase-aligned states",
        ));
    }
    let d = rho.dim() as f64;
    Ok(coherence_fraction(rho, cfg).value > 1.0 / d + STRICT_SLACK)
}

/// Distillable coherence of a pure qubit with coherence fraction `f`,
/// `H((1 + 2 sqrt(f (1 - f))) / 2)`.
pub fn distillable_coherence_pure_qubit(f: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(0.5 - SLACK..=1.0 + SLACK).contains(&f) {
        return Err(Error::OutOfRange {
            name: "coherence fraction",
            value: f,
            lo: 0.5,
            hi: 1.0,
        });
    }
    let f = f.clamp(0.5, 1.0);
    let root = (f * (1.0 - f)).max(0.0).sqrt();
    Ok(binary_entropy((1.0 + 2.0 * root) / 2.0))
}

fn check_dims(rho: &DensityMatrix, dims: (usize, usize)) -> Result<()> {
    if rho.dim() != dims.0 * dims.1 {
        return Err(Error::DimensionMismatch {
            expected: dims.0 * dims.1,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Global coherence fraction of a bipartite state. The bipartite maximally
/// coherent set is the ordinary one in dimension `d1 * d2` under `|kl> -> k d2 + l`.
pub fn bipartite_coherence_fraction(
    rho_ab: &DensityMatrix,
    dims: (usize, usize),
    cfg: &OptimizerConfig,
) -> Result<FractionResult> {
    check_dims(rho_ab, dims)?;
    Ok(coherence_fraction(rho_ab, cfg))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalGlobalReport {
    pub f_ab: f64,
    pub f_a: f64,
    pub f_b: f64,
    /// `F_a + F_b`.
    pub lhs: f64,
    /// `2 F_ab + 1/2`.
    pub rhs: f64,
    pub holds: bool,
}

/// Local coherence fractions of an aligned two-qubit state against the
/// bound `F_a + F_b <= 2 F_ab + 1/2`.
pub fn local_global_report(rho_ab: &DensityMatrix, cfg: &OptimizerConfig) -> Result<LocalGlobalReport> {
    check_dims(rho_ab, (2, 2))?;
    if !check_phase_alignment(rho_ab, ALIGNMENT_TOL).aligned {
        return Err(Error::NotApplicable("local/global bound requires a phase-aligned state"));
    }
    let a = partial_trace(rho_ab, (2, 2), Subsystem::First)?;
    let b = partial_trace(rho_ab, (2, 2), Subsystem::Second)?;
    let f_ab = coherence_fraction(rho_ab, cfg).value;
    let f_a = coherence_fraction(&a, cfg).value;
    let f_b = coherence_fraction(&b, cfg).value;
    let lhs = f_a + f_b;
    let rhs = 2.0 * f_ab + 0.5;
    Ok(LocalGlobalReport {
        f_ab,
        f_a,
        f_b,
        lhs,
        rhs,
        holds: lhs <= rhs + STRICT_SLACK,
    })
}
