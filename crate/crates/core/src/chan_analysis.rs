//! Channel-level quantities: optimal coherence fraction, cohering and
//! decohering power, the complementarity relation `2F + D`, the reference
//! closed forms for the named qubit families and bipartite channel studies.
//!
//! For a qubit channel with affine form `(t, T)` the input `(|0> + e^{i theta}|1>)/sqrt 2`
//! has Bloch vector `(cos theta, sin theta, 0)` and the output has
//! `C_l1 = |P(t + T v)|`, `P` the projection onto the first two coordinates.
//! All one-parameter qubit scans go through that expression.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2, TAU};
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::channels::{affine_representation, tensor_channel, AffineRep, Channel, ChannelSpec};
use crate::error::{Error, Result};
use crate::fraction::{coherence_fraction, coherence_fraction_warm, OptimizerConfig};
use crate::measures::l1_coherence;
use crate::qcore::{
    maximally_coherent_state, sample_pure_state, seeded_rng, ComplexMatrix, DensityMatrix, PhaseVector, PureState,
};

/// Golden-section refinement stops once the bracket is this narrow.
const REFINE_TOL: f64 = 1e-12;
/// Hill-climb step schedule for pure-input searches.
const STEP_START: f64 = 0.5;
const STEP_END: f64 = 1e-6;
/// Cap on hill-climb passes at a single step size.
const MAX_PASSES: usize = 64;
/// An unrestricted search must beat the restricted scan by this much to replace it.
const REDUCTION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    /// One-parameter scan over the qubit maximally coherent family.
    QubitTheorem3,
    /// Multi-start search over all pure inputs.
    GeneralSearch,
}

impl SearchMethod {
    pub fn name(self) -> &'static str {
        match self {
            SearchMethod::QubitTheorem3 => "qubit_theorem3",
            SearchMethod::GeneralSearch => "general_search",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFractionResult {
    pub value: f64,
    pub argmax_input: PureState,
    /// Phases of the maximally coherent state closest to the optimal output.
    pub argmax_phases: PhaseVector,
    pub method: SearchMethod,
    pub converged: bool,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn require_qubit(ch: &Channel) -> Result<()> {
    if ch.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: ch.dim(),
        });
    }
    Ok(())
}

/// `C_l1` of the output for the Bloch input `v`.
fn output_l1(rep: &AffineRep, v: [f64; 3]) -> f64 {
    let w = rep.map_bloch(v);
    w[0].hypot(w[1])
}

fn equator(theta: f64) -> [f64; 3] {
    [theta.cos(), theta.sin(), 0.0]
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > REFINE_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Grid over `points` samples of `[lo, hi]` (closed when `closed`, else
/// periodic), then golden-section refinement around the best sample.
fn scan_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize, closed: bool) -> (f64, f64) {
    let n = points.max(2);
    let h = if closed { (hi - lo) / (n - 1) as f64 } else { (hi - lo) / n as f64 };
    let mut best = (lo, f(lo));
    for k in 1..n {
        let x = lo + h * k as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    if closed {
        a = a.max(lo);
        b = b.min(hi);
    }
    let refined = golden_max(&f, a, b);
    if refined.1 > best.1 {
        best = refined;
    }
    if closed {
        let end = f(hi);
        if end > best.1 {
            best = (hi, end);
        }
    }
    best
}

fn mc_qubit(theta: f64) -> PureState {
    maximally_coherent_state(&PhaseVector::canonical(&[0.0, theta]))
}

fn output_phases(ch: &Channel, psi: &PureState, cfg: &OptimizerConfig) -> (f64, PhaseVector, bool) {
    let rho = ch.apply_pure_unchecked(psi.amplitudes());
    let r = coherence_fraction(&rho, cfg);
    (r.value, r.argmax_phases, r.converged)
}

/// Best coherence fraction over inputs from the maximally coherent set only.
/// For qubits this is `1/2 + max_theta C_l1(Lambda(|phi_theta><phi_theta|))/2`.
pub fn ocf_over_maximally_coherent(ch: &Channel, cfg: &OptimizerConfig) -> Result<ChannelFractionResult> {
    cfg.validate()?;
    require_qubit(ch)?;
    let rep = affine_representation(ch)?;
    let (theta, l1) = scan_max(|th| output_l1(&rep, equator(th)), 0.0, TAU, cfg.channel_grid, false);
    let input = mc_qubit(theta);
    let (value, phases, _) = output_phases(ch, &input, cfg);
    debug_assert!((value - (0.5 + 0.5 * l1)).abs() < 1e-9);
    Ok(ChannelFractionResult {
        value,
        argmax_input: input,
        argmax_phases: phases,
        method: SearchMethod::QubitTheorem3,
        converged: true,
    })
}

struct Candidate {
    value: f64,
    psi: DVector<Complex64>,
    phases: PhaseVector,
    converged: bool,
}

fn normalize(v: &DVector<Complex64>) -> DVector<Complex64> {
    let n = v.norm();
    v / c(n, 0.0)
}

fn from_real(x: &[f64]) -> DVector<Complex64> {
    let d = x.len() / 2;
    normalize(&DVector::from_fn(d, |i, _| c(x[2 * i], x[2 * i + 1])))
}

fn to_real(psi: &DVector<Complex64>) -> Vec<f64> {
    psi.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Fast inner evaluation: warm start plus the all-zero start.
fn quick_eval(ch: &Channel, psi: &DVector<Complex64>, warm: &PhaseVector, cfg: &OptimizerConfig) -> (f64, PhaseVector) {
    let rho = ch.apply_pure_unchecked(psi);
    let r = coherence_fraction_warm(&rho, warm, cfg, 1);
    (r.value, r.argmax_phases)
}

/// Alternating maximization: with the maximally coherent `|phi>` fixed the best
/// input is the top eigenvector of `Lambda^dag(|phi><phi|)`.
fn polish(ch: &Channel, cand: &mut Candidate, cfg: &OptimizerConfig, seen: &mut f64) -> bool {
    for _ in 0..cfg.max_iters {
        let phi = maximally_coherent_state(&cand.phases);
        let a = phi.amplitudes();
        let heis = ch.apply_adjoint(&(a * a.adjoint()));
        let heis = (&heis + heis.adjoint()) * c(0.5, 0.0);
        let eig = heis.symmetric_eigen();
        let top = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold(0, |best, (i, &v)| if v > eig.eigenvalues[best] { i } else { best });
        let psi = normalize(&eig.eigenvectors.column(top).into_owned());
        let (value, phases) = quick_eval(ch, &psi, &cand.phases, cfg);
        *seen = seen.max(value);
        if value <= cand.value + cfg.tol {
            if value > cand.value {
                *cand = Candidate { value, psi, phases, converged: true };
            }
            return true;
        }
        *cand = Candidate { value, psi, phases, converged: true };
    }
    false
}

fn hill_climb(ch: &Channel, cand: &mut Candidate, cfg: &OptimizerConfig, seen: &mut f64) {
    let mut x = to_real(&cand.psi);
    let mut step = STEP_START;
    while step >= STEP_END {
        for _ in 0..MAX_PASSES {
            let mut improved = false;
            for i in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[i] += sign * step;
                    let psi = from_real(&y);
                    let (value, phases) = quick_eval(ch, &psi, &cand.phases, cfg);
                    *seen = seen.max(value);
                    if value > cand.value {
                        x = to_real(&psi);
                        *cand = Candidate { value, psi, phases, converged: cand.converged };
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
}

fn start_input(dim: usize, restart: usize, seed: u64) -> DVector<Complex64> {
    if restart == 0 {
        return DVector::from_element(dim, c(1.0 / (dim as f64).sqrt(), 0.0));
    }
    let mut rng = seeded_rng(seed.wrapping_add(restart as u64));
    sample_pure_state(dim, &mut rng).amplitudes().clone()
}

fn search_restart(ch: &Channel, cfg: &OptimizerConfig, restart: usize) -> Candidate {
    let d = ch.dim();
    let psi = start_input(d, restart, cfg.seed);
    let rho = ch.apply_pure_unchecked(&psi);
    let r = coherence_fraction(&rho, cfg);
    let mut cand = Candidate {
        value: r.value,
        psi,
        phases: r.argmax_phases,
        converged: true,
    };
    let mut seen = cand.value;
    let first = polish(ch, &mut cand, cfg, &mut seen);
    hill_climb(ch, &mut cand, cfg, &mut seen);
    let second = polish(ch, &mut cand, cfg, &mut seen);
    let rho = ch.apply_pure_unchecked(&cand.psi);
    let full = coherence_fraction_warm(&rho, &cand.phases, cfg, cfg.restarts);
    if full.value >= cand.value {
        cand.value = full.value;
        cand.phases = full.argmax_phases;
    }
    cand.converged = first && second && full.converged;
    debug_assert!(cand.value >= seen - 1e-12, "search kept a worse input than one it sampled");
    cand
}

/// Multi-start search over all pure inputs. Restarts run in parallel; the
/// first restart reaching the maximum wins, so the result is schedule-independent.
pub fn general_search(ch: &Channel, cfg: &OptimizerConfig, restarts: usize) -> Result<ChannelFractionResult> {
    cfg.validate()?;
    let runs: Vec<Candidate> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| search_restart(ch, cfg, r))
        .collect();
    let mut best = &runs[0];
    for run in &runs[1..] {
        if run.value > best.value {
            best = run;
        }
    }
    let input = PureState::normalized(best.psi.iter().copied().collect())?;
    Ok(ChannelFractionResult {
        value: best.value,
        argmax_input: input,
        argmax_phases: best.phases.clone(),
        method: SearchMethod::GeneralSearch,
        converged: runs.iter().all(|r| r.converged),
    })
}

/// Optimal coherence fraction `max_psi F_c(Lambda(|psi><psi|))`.
///
/// Qubit channels that keep incoherent states incoherent reach the optimum on
/// the maximally coherent family, so a one-parameter scan is exact. Other
/// qubit channels may do better on inputs off that family; for them the
/// unrestricted search is also run and the larger value is reported.
pub fn optimal_coherence_fraction(ch: &Channel, cfg: &OptimizerConfig) -> Result<ChannelFractionResult> {
    cfg.validate()?;
    match ch.dim() {
        1 => Ok(ChannelFractionResult {
            value: 1.0,
            argmax_input: PureState::basis(1, 0),
            argmax_phases: PhaseVector::zeros(1),
            method: SearchMethod::GeneralSearch,
            converged: true,
        }),
        2 => {
            let restricted = ocf_over_maximally_coherent(ch, cfg)?;
            if affine_representation(ch)?.preserves_incoherence() {
                return Ok(restricted);
            }
            let search = general_search(ch, cfg, cfg.search_restarts)?;
            if search.value > restricted.value + REDUCTION_SLACK {
                Ok(search)
            } else {
                Ok(restricted)
            }
        }
        _ => general_search(ch, cfg, cfg.search_restarts),
    }
}

/// Minimum of `C_l1(Lambda(phi))` over maximally coherent `phi`.
fn min_output_l1_over_m(ch: &Channel, cfg: &OptimizerConfig) -> Result<f64> {
    if ch.dim() == 2 {
        let rep = affine_representation(ch)?;
        let (_, neg) = scan_max(|th| -output_l1(&rep, equator(th)), 0.0, TAU, cfg.channel_grid, false);
        return Ok(-neg);
    }
    let d = ch.dim();
    let eval = |angles: &[f64]| {
        let phi = maximally_coherent_state(&PhaseVector::canonical(angles));
        l1_coherence(&ch.apply_pure_unchecked(phi.amplitudes()))
    };
    let mins: Vec<f64> = (0..cfg.search_restarts)
        .into_par_iter()
        .map(|r| {
            let mut angles = vec![0.0; d];
            if r > 0 {
                let mut rng = seeded_rng(cfg.seed.wrapping_add(r as u64));
                for a in angles.iter_mut().skip(1) {
                    *a = rng.random::<f64>() * TAU;
                }
            }
            let mut best = eval(&angles);
            let mut step = STEP_START;
            while step >= STEP_END {
                for _ in 0..MAX_PASSES {
                    let mut improved = false;
                    for i in 1..d {
                        for sign in [1.0, -1.0] {
                            let mut trial = angles.clone();
                            trial[i] += sign * step;
                            let v = eval(&trial);
                            if v < best {
                                best = v;
                                angles = trial;
                                improved = true;
                            }
                        }
                    }
                    if !improved {
                        break;
                    }
                }
                step *= 0.5;
            }
            best
        })
        .collect();
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}

/// Decohering power `1 - min_{phi in M} C_l1(Lambda(phi))`.
///
/// For `d > 2` the deficit is normalized by the maximal value `d - 1`,
/// `(d - 1 - min) / (d - 1)`; this normalization is an extension and is not
/// used by the qubit complementarity checks.
pub fn decohering_power(ch: &Channel, cfg: &OptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    let min = min_output_l1_over_m(ch, cfg)?;
    Ok(match ch.dim() {
        1 => 0.0,
        2 => 1.0 - min,
        d => (d as f64 - 1.0 - min) / (d as f64 - 1.0),
    })
}

/// Cohering power `max_{rho incoherent} C_l1(Lambda(rho))`.
pub fn cohering_power(ch: &Channel, cfg: &OptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    let d = ch.dim();
    if d == 2 {
        let rep = affine_representation(ch)?;
        let (_, best) = scan_max(
            |q| output_l1(&rep, [0.0, 0.0, 2.0 * q - 1.0]),
            0.0,
            1.0,
            cfg.channel_grid,
            true,
        );
        return Ok(best);
    }
    // C_l1 of the output is convex in the input populations, so the vertices
    // carry the maximum; random interior points are checked as well.
    let eval = |probs: &[f64]| {
        let m = ComplexMatrix::from_fn(d, d, |i, j| if i == j { c(probs[i], 0.0) } else { c(0.0, 0.0) });
        l1_coherence(&DensityMatrix::from_matrix_unchecked(ch.apply_matrix(&m)))
    };
    let mut best = 0.0f64;
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        best = best.max(eval(&e));
    }
    let mut rng = seeded_rng(cfg.seed);
    for _ in 0..cfg.search_restarts {
        let w: Vec<f64> = (0..d).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
        let total: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / total).collect();
        best = best.max(eval(&p));
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementarityReport {
    pub f: f64,
    pub d: f64,
    /// `2F + D`.
    pub sum: f64,
    /// `sum - 2`.
    pub k: f64,
    /// `2 <= 2F + D <= 3` within `1e-6`.
    pub bounds_hold: bool,
}

impl ComplementarityReport {
    pub fn from_values(f: f64, d: f64) -> Self {
        let sum = 2.0 * f + d;
        Self {
            f,
            d,
            sum,
            k: sum - 2.0,
            bounds_hold: (2.0 - 1e-6..=3.0 + 1e-6).contains(&sum),
        }
    }
}

pub fn complementarity_report(ch: &Channel, cfg: &OptimizerConfig) -> Result<ComplementarityReport> {
    require_qubit(ch)?;
    let f = optimal_coherence_fraction(ch, cfg)?.value;
    let d = decohering_power(ch, cfg)?;
    Ok(ComplementarityReport::from_values(f, d))
}

/// `X_1, X_2, Y_1, Y_2` and `p_+, p_-` of the unitary closed form.
fn unitary_p(axis: [f64; 3], angle: f64) -> (f64, f64) {
    let s2 = (angle / 2.0).sin().powi(2);
    let [n1, n2, n3] = axis;
    let x1 = angle.cos() + 2.0 * n1 * n1 * s2;
    let x2 = angle.cos() + 2.0 * n2 * n2 * s2;
    let y1 = 2.0 * n1 * n2 * s2 + n3 * angle.sin();
    let y2 = 2.0 * n1 * n2 * s2 - n3 * angle.sin();
    let half = (x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2) / 2.0;
    let disc = (half * half - (x1 * x1 * x2 * x2 + y1 * y1 * y2 * y2)).max(0.0).sqrt();
    (half + disc, half - disc)
}

fn self_comp_p(theta: f64) -> (f64, f64) {
    let (a, b) = ((1.0 + theta.cos()).abs(), (1.0 - theta.cos()).abs());
    (a.max(b), a.min(b))
}

/// Reference closed form of the optimal coherence fraction, evaluated verbatim.
pub fn closed_form_ocf(spec: &ChannelSpec) -> Result<f64> {
    spec.validate()?;
    match *spec {
        ChannelSpec::Unitary { axis, angle } => Ok(0.5 + 0.5 * unitary_p(axis, angle).0),
        ChannelSpec::Depolarizing { p } => Ok(1.0 - p / 2.0),
        ChannelSpec::BitFlip { .. } => Ok(1.0),
        ChannelSpec::Gad { p, .. } => Ok(0.5 + 0.5 * (1.0 - p).sqrt()),
        ChannelSpec::SelfComplementary { theta, .. } => {
            Ok(0.5 + theta.sin().abs() * self_comp_p(theta).0 / (2.0 * SQRT_2))
        }
        ChannelSpec::Kraus | ChannelSpec::Identity { .. } => Err(Error::UnsupportedKind(spec.kind_name())),
    }
}

/// Reference closed form of the decohering power, evaluated verbatim.
pub fn closed_form_decohering_power(spec: &ChannelSpec) -> Result<f64> {
    spec.validate()?;
    match *spec {
        ChannelSpec::Unitary { axis, angle } => Ok(1.0 - unitary_p(axis, angle).1),
        ChannelSpec::Depolarizing { p } => Ok(p),
        ChannelSpec::BitFlip { p } => Ok(1.0 - (1.0 - 2.0 * p).abs()),
        ChannelSpec::Gad { p, .. } => Ok(1.0 - (1.0 - p).sqrt()),
        ChannelSpec::SelfComplementary { theta, .. } => Ok(1.0 - theta.sin().abs() * self_comp_p(theta).1),
        ChannelSpec::Kraus | ChannelSpec::Identity { .. } => Err(Error::UnsupportedKind(spec.kind_name())),
    }
}

/// Decohering power of the self-complementary family from direct Kraus algebra:
/// `1 - |sin theta| p_min / sqrt 2`.
pub fn self_complementary_decohering_power(theta: f64) -> f64 {
    1.0 - theta.sin().abs() * self_comp_p(theta).1 * FRAC_1_SQRT_2
}

/// `2F + D = 2 + |sin 2 theta| / sqrt 2` for the self-complementary family,
/// with `F` taken over the maximally coherent inputs.
pub fn self_complementary_sum(theta: f64) -> f64 {
    2.0 + (2.0 * theta).sin().abs() * FRAC_1_SQRT_2
}

/// Optimal coherence fraction of the self-complementary family over all pure
/// inputs: `1/2 + |sin theta| (|cos theta| + sqrt(1 + cos^2 theta)) / (2 sqrt 2)`.
pub fn self_complementary_unrestricted_ocf(theta: f64) -> f64 {
    let (s, co) = theta.sin_cos();
    0.5 + s.abs() * (co.abs() + (1.0 + co * co).sqrt()) / (2.0 * SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Optimal coherence fraction over all pure inputs.
    Ocf,
    /// Optimal coherence fraction over maximally coherent inputs only.
    OcfOverM,
    DecoheringPower,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Ocf => "ocf",
            Quantity::OcfOverM => "ocf_over_m",
            Quantity::DecoheringPower => "decohering_power",
        }
    }
}

/// A reference closed form next to the numerically computed value.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub spec: ChannelSpec,
    pub quantity: Quantity,
    pub closed_form: f64,
    pub numeric: f64,
}

impl Comparison {
    pub fn gap(&self) -> f64 {
        (self.closed_form - self.numeric).abs()
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: closed form {:.9} numeric {:.9} gap {:.3e}",
            self.spec,
            self.quantity.name(),
            self.closed_form,
            self.numeric,
            self.gap()
        )
    }
}

/// Printed closed forms against numerics for one named qubit channel.
pub fn closed_form_comparisons(spec: &ChannelSpec, cfg: &OptimizerConfig) -> Result<Vec<Comparison>> {
    let closed_f = closed_form_ocf(spec)?;
    let closed_d = closed_form_decohering_power(spec)?;
    let ch = Channel::from_spec(spec)?;
    let over_m = ocf_over_maximally_coherent(&ch, cfg)?.value;
    let full = optimal_coherence_fraction(&ch, cfg)?.value;
    let d = decohering_power(&ch, cfg)?;
    let row = |quantity, closed_form, numeric| Comparison {
        spec: spec.clone(),
        quantity,
        closed_form,
        numeric,
    };
    Ok(vec![
        row(Quantity::Ocf, closed_f, full),
        row(Quantity::OcfOverM, closed_f, over_m),
        row(Quantity::DecoheringPower, closed_d, d),
    ])
}

/// Every comparison over `specs` whose gap exceeds `tol`.
pub fn discrepancy_report(specs: &[ChannelSpec], cfg: &OptimizerConfig, tol: f64) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for spec in specs {
        out.extend(closed_form_comparisons(spec, cfg)?.into_iter().filter(|c| c.gap() > tol));
    }
    Ok(out)
}

/// Optimal coherence fraction of `Lambda1 (x) Lambda2` over two-qubit pure inputs.
pub fn bipartite_ocf(first: &Channel, second: &Channel, cfg: &OptimizerConfig) -> Result<ChannelFractionResult> {
    require_qubit(first)?;
    require_qubit(second)?;
    general_search(&tensor_channel(first, second), cfg, cfg.search_restarts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativityReport {
    /// `F(Lambda1 (x) Lambda2)`.
    pub lhs: f64,
    /// `F(Lambda1 (x) I)`.
    pub first_one_sided: f64,
    /// `F(I (x) Lambda2)`.
    pub second_one_sided: f64,
    /// Product of the one-sided values.
    pub rhs: f64,
    /// `lhs - rhs`.
    pub gap: f64,
}

/// Measures `F(Lambda1 (x) Lambda2)` against `F(Lambda1 (x) I) F(I (x) Lambda2)`.
pub fn multiplicativity_report(first: &Channel, second: &Channel, cfg: &OptimizerConfig) -> Result<MultiplicativityReport> {
    let id = Channel::identity(2);
    let lhs = bipartite_ocf(first, second, cfg)?.value;
    let first_one_sided = bipartite_ocf(first, &id, cfg)?.value;
    let second_one_sided = bipartite_ocf(&id, second, cfg)?.value;
    let rhs = first_one_sided * second_one_sided;
    Ok(MultiplicativityReport {
        lhs,
        first_one_sided,
        second_one_sided,
        rhs,
        gap: lhs - rhs,
    })
}
