//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so every line is printed even when a criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use cohfrac::chan_analysis::{
    bipartite_ocf, closed_form_ocf, complementarity_report, decohering_power, discrepancy_report,
    ocf_over_maximally_coherent, optimal_coherence_fraction, self_complementary_decohering_power,
    self_complementary_sum, Quantity,
};
use cohfrac::channels::random_channel;
use cohfrac::families::{qutrit_counterexample, random_nonnegative_state, random_x_state, two_qubit_family};
use cohfrac::fraction::{
    coherence_fraction, coherence_fraction_oracle, coherence_fraction_upper_bound, distillable_coherence_pure_qubit,
    local_global_report,
};
use cohfrac::measures::relative_entropy_coherence;
use cohfrac::qcore::{sample_density_matrix, sample_pure_state, seeded_rng};
use cohfrac::{Channel, ChannelSpec, OptimizerConfig};

/// `bound - F` for the qutrit mixture at p = 1/2, from a Nelder-Mead refinement
/// of a 360 x 360 phase grid computed outside this crate.
const QUTRIT_GAP: f64 = 1.877471707452e-4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn cfg() -> OptimizerConfig {
    OptimizerConfig::default()
}

fn qubit_exactness() -> Outcome {
    let cfg = cfg();
    let mut rng = seeded_rng(101);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let rho = sample_density_matrix(2, &mut rng);
        let want = 0.5 + rho.get(0, 1).norm();
        worst = worst.max((coherence_fraction(&rho, &cfg).value - want).abs());
    }
    outcome(worst <= 1e-12, format!("1000 qubits, max |F - (1/2 + |rho_01|)| = {worst:.3e}"))
}

fn equality_class() -> Outcome {
    let cfg = cfg();
    let mut rng = seeded_rng(202);
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut record = |rho: &cohfrac::DensityMatrix| {
        let gap = (coherence_fraction(rho, &cfg).value - coherence_fraction_upper_bound(rho)).abs();
        worst = worst.max(gap);
        count += 1;
    };
    for d in 2..=4 {
        for _ in 0..1000 {
            record(&random_nonnegative_state(d, &mut rng));
            record(&sample_pure_state(d, &mut rng).to_density());
        }
    }
    for _ in 0..1000 {
        record(&random_x_state(4, &mut rng));
    }
    outcome(worst <= 1e-6, format!("{count} aligned states, max |F - (1 + C_l1)/d| = {worst:.3e}"))
}

fn universal_bound() -> Outcome {
    let cfg = cfg();
    let mut rng = seeded_rng(303);
    let mut worst = f64::NEG_INFINITY;
    for d in 3..=4 {
        for _ in 0..1000 {
            let rho = sample_density_matrix(d, &mut rng);
            worst = worst.max(coherence_fraction(&rho, &cfg).value - coherence_fraction_upper_bound(&rho));
        }
    }
    let rho = qutrit_counterexample(0.5);
    let gap = coherence_fraction_upper_bound(&rho) - coherence_fraction(&rho, &cfg).value;
    let oracle_gap = coherence_fraction_upper_bound(&rho) - coherence_fraction_oracle(&rho, 360).unwrap();
    let pass = worst <= 1e-8 && gap > 1e-4 && (gap - QUTRIT_GAP).abs() <= 1e-9 && oracle_gap >= gap - 1e-12;
    outcome(
        pass,
        format!(
            "2000 mixed states, max (F - bound) = {worst:.3e}; qutrit gap {gap:.10e} (pinned {QUTRIT_GAP:.10e}, grid {oracle_gap:.6e})"
        ),
    )
}

fn oracle_agreement() -> Outcome {
    let cfg = cfg();
    let mut rng = seeded_rng(404);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = sample_density_matrix(3, &mut rng);
        let gap = (coherence_fraction(&rho, &cfg).value - coherence_fraction_oracle(&rho, 360).unwrap()).abs();
        worst = worst.max(gap);
    }
    outcome(worst <= 1e-3, format!("100 qutrits, max |ascent - grid(360)| = {worst:.3e}"))
}

fn closed_form_regression() -> Outcome {
    let cfg = cfg();
    let ocf = |spec: &ChannelSpec| optimal_coherence_fraction(&Channel::from_spec(spec).unwrap(), &cfg).unwrap().value;
    let dp = |spec: &ChannelSpec| decohering_power(&Channel::from_spec(spec).unwrap(), &cfg).unwrap();
    let mut named_worst = 0.0f64;
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let dep = ChannelSpec::Depolarizing { p };
        named_worst = named_worst.max((ocf(&dep) - (1.0 - p / 2.0)).abs()).max((dp(&dep) - p).abs());
        let bf = ChannelSpec::BitFlip { p };
        named_worst = named_worst
            .max((ocf(&bf) - 1.0).abs())
            .max((dp(&bf) - (1.0 - (1.0 - 2.0 * p).abs())).abs());
        for gamma in [0.0, 0.3, 0.7, 1.0] {
            let gad = ChannelSpec::Gad { p, gamma };
            let s = (1.0 - p).sqrt();
            named_worst = named_worst.max((ocf(&gad) - (0.5 + s / 2.0)).abs()).max((dp(&gad) - (1.0 - s)).abs());
        }
    }
    let mut unitary_worst = 0.0f64;
    let mut unitary_bad = 0;
    let mut first_bad = String::new();
    for i in 0..5 {
        for j in 0..5 {
            let (polar, azimuth) = (PI * i as f64 / 4.0, TAU * j as f64 / 5.0);
            let axis = [polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos()];
            for angle in [-PI, -PI / 2.0, 0.0, PI / 2.0, PI] {
                let spec = ChannelSpec::Unitary { axis, angle };
                let gap = (ocf(&spec) - closed_form_ocf(&spec).unwrap()).abs();
                if gap > 1e-4 {
                    unitary_bad += 1;
                    if first_bad.is_empty() {
                        first_bad = format!(" first at polar={polar:.4} azimuth={azimuth:.4} angle={angle:.4}");
                    }
                }
                unitary_worst = unitary_worst.max(gap);
            }
        }
    }
    outcome(
        named_worst <= 1e-4 && unitary_worst <= 1e-4,
        format!(
            "dep/bf/gad max gap {named_worst:.3e}; unitary {unitary_bad}/125 grid points over 1e-4, max gap {unitary_worst:.4}{first_bad}"
        ),
    )
}

fn complementarity_bounds() -> Outcome {
    let cfg = cfg();
    let mut specs = Vec::new();
    let s3 = 3f64.sqrt().recip();
    for k in 0..20 {
        let x = k as f64 / 19.0;
        specs.push(ChannelSpec::Depolarizing { p: x });
        specs.push(ChannelSpec::BitFlip { p: x });
        specs.push(ChannelSpec::Gad { p: x, gamma: 0.3 });
        specs.push(ChannelSpec::Gad { p: x, gamma: 1.0 });
        specs.push(ChannelSpec::SelfComplementary { theta: PI * x, phi: 0.4 });
        specs.push(ChannelSpec::Unitary { axis: [s3, s3, s3], angle: -PI + TAU * x });
    }
    let mut bound_violation = 0.0f64;
    let mut exact_gap = 0.0f64;
    let mut checked = 0;
    for spec in &specs {
        let r = complementarity_report(&Channel::from_spec(spec).unwrap(), &cfg).unwrap();
        bound_violation = bound_violation.max(2.0 - r.sum).max(r.sum - 3.0);
        let want = match *spec {
            ChannelSpec::Depolarizing { .. } | ChannelSpec::Gad { .. } => Some(2.0),
            ChannelSpec::BitFlip { p } => Some(3.0 - (1.0 - 2.0 * p).abs()),
            _ => None,
        };
        if let Some(w) = want {
            exact_gap = exact_gap.max((r.sum - w).abs());
        }
        checked += 1;
    }
    for i in 0..100 {
        let ch = random_channel(2, 1 + i % 4, 5000 + i as u64).unwrap();
        let r = complementarity_report(&ch, &cfg).unwrap();
        bound_violation = bound_violation.max(2.0 - r.sum).max(r.sum - 3.0);
        checked += 1;
    }
    outcome(
        bound_violation <= 1e-6 && exact_gap <= 1e-6,
        format!("{checked} channels, worst bound excess {bound_violation:.3e}, closed-form sum gap {exact_gap:.3e}"),
    )
}

fn self_complementary_forms() -> Outcome {
    let cfg = cfg();
    let mut f_gap = 0.0f64;
    let mut d_gap = 0.0f64;
    let mut sum_gap = 0.0f64;
    let mut specs = Vec::new();
    for k in 0..=8 {
        let theta = PI * k as f64 / 8.0;
        for phi in [0.0, 1.3] {
            let spec = ChannelSpec::SelfComplementary { theta, phi };
            let ch = Channel::from_spec(&spec).unwrap();
            let f = ocf_over_maximally_coherent(&ch, &cfg).unwrap().value;
            let d = decohering_power(&ch, &cfg).unwrap();
            f_gap = f_gap.max((f - closed_form_ocf(&spec).unwrap()).abs());
            d_gap = d_gap.max((d - self_complementary_decohering_power(theta)).abs());
            sum_gap = sum_gap.max((2.0 * f + d - self_complementary_sum(theta)).abs());
            specs.push(spec);
        }
    }
    let half = Channel::from_spec(&ChannelSpec::SelfComplementary { theta: PI / 2.0, phi: 0.0 }).unwrap();
    let d_half = decohering_power(&half, &cfg).unwrap();
    let reference_mismatch = (d_half - 0.0).abs() > 1e-4 && (d_half - (1.0 - FRAC_1_SQRT_2)).abs() <= 1e-4;
    let report = discrepancy_report(&specs, &cfg, 1e-4).unwrap();
    let flagged = report.iter().any(|c| {
        c.quantity == Quantity::DecoheringPower
            && matches!(c.spec, ChannelSpec::SelfComplementary { theta, .. } if (theta - PI / 2.0).abs() < 1e-12)
    });
    let over_m_flags = report.iter().filter(|c| c.quantity == Quantity::OcfOverM).count();
    let full_flags = report.iter().filter(|c| c.quantity == Quantity::Ocf).count();
    // the reference sum 2 + |sin 2 theta| / (2 sqrt 2) at theta = pi/4
    let quarter = Channel::from_spec(&ChannelSpec::SelfComplementary { theta: PI / 4.0, phi: 0.0 }).unwrap();
    let s = 2.0 * ocf_over_maximally_coherent(&quarter, &cfg).unwrap().value + decohering_power(&quarter, &cfg).unwrap();
    let reference_sum_missed = (s - (2.0 + 1.0 / (2.0 * SQRT_2))).abs() > 1e-4;
    outcome(
        f_gap <= 1e-4 && d_gap <= 1e-4 && sum_gap <= 1e-4 && reference_mismatch && flagged && over_m_flags == 0 && reference_sum_missed,
        format!(
            "F gap {f_gap:.3e}, corrected D gap {d_gap:.3e}, corrected sum gap {sum_gap:.3e}; D(pi/2) = {d_half:.5} vs reference 0; \
             report has {} entries ({full_flags} for F over all inputs)",
            report.len()
        ),
    )
}

fn distillable_relation() -> Outcome {
    let cfg = cfg();
    let at = |f: f64| distillable_coherence_pure_qubit(f).unwrap();
    let ends = at(0.5).abs() <= 1e-12 && (at(1.0) - 1.0).abs() <= 1e-12;
    let mut increasing = true;
    let mut prev = at(0.5);
    for k in 1..=100 {
        let v = at(0.5 + 0.5 * k as f64 / 100.0);
        increasing &= v > prev;
        prev = v;
    }
    let mut rng = seeded_rng(808);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = sample_pure_state(2, &mut rng).to_density();
        let f = coherence_fraction(&rho, &cfg).value.min(1.0);
        worst = worst.max((at(f) - relative_entropy_coherence(&rho)).abs());
    }
    outcome(
        ends && increasing && worst <= 1e-9,
        format!("endpoints {ends}, strictly increasing {increasing}, max |C_d(F) - C_r| = {worst:.3e}"),
    )
}

fn local_global_bound() -> Outcome {
    let cfg = cfg();
    let mut rng = seeded_rng(909);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let r = local_global_report(&random_nonnegative_state(4, &mut rng), &cfg).unwrap();
        worst = worst.max(r.lhs - r.rhs);
    }
    let mut family = 0.0f64;
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        family = family.max((coherence_fraction(&two_qubit_family(p), &cfg).value - (1.0 + p) / 2.0).abs());
    }
    outcome(
        worst <= 1e-9 && family <= 1e-6,
        format!("max (F_a + F_b - 2F_ab - 1/2) = {worst:.3e}; family gap {family:.3e}"),
    )
}

fn bipartite_observations() -> Outcome {
    let cfg = OptimizerConfig {
        search_restarts: 32,
        ..cfg()
    };
    let id = Channel::identity(2);
    let f = |a: &Channel, b: &Channel| bipartite_ocf(a, b, &cfg).unwrap().value;
    let mut bf_gap = 0.0f64;
    let mut order_violation = 0.0f64;
    let mut sym = 0.0f64;
    let mut ancilla = 0.0f64;
    let mut mult = 0.0f64;
    for k in 1..=9 {
        let p = k as f64 / 10.0;
        let bf = Channel::from_spec(&ChannelSpec::BitFlip { p }).unwrap();
        let dep = Channel::from_spec(&ChannelSpec::Depolarizing { p }).unwrap();
        let ad = Channel::from_spec(&ChannelSpec::Gad { p, gamma: 1.0 }).unwrap();
        let gad = Channel::from_spec(&ChannelSpec::Gad { p, gamma: 0.5 }).unwrap();
        bf_gap = bf_gap.max((f(&bf, &id) - 1.0).abs()).max((f(&bf, &bf) - 1.0).abs());
        for ch in [&dep, &ad] {
            order_violation = order_violation.max(f(ch, ch) - f(ch, &id));
        }
        let chans = [&bf, &dep, &gad];
        let left: Vec<f64> = chans.iter().map(|c| f(c, &id)).collect();
        let right: Vec<f64> = chans.iter().map(|c| f(&id, c)).collect();
        for (i, c) in chans.iter().enumerate() {
            let single = optimal_coherence_fraction(c, &cfg).unwrap().value;
            ancilla = ancilla.max((left[i] - single).abs()).max((right[i] - single).abs());
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let ab = f(chans[i], chans[j]);
            let ba = f(chans[j], chans[i]);
            sym = sym.max((ab - ba).abs());
            mult = mult.max((ab - left[i] * right[j]).abs());
        }
    }
    outcome(
        bf_gap <= 1e-3 && order_violation <= 0.0 && sym <= 1e-3 && ancilla <= 1e-3 && mult <= 1e-2,
        format!(
            "bit-flip gap {bf_gap:.3e}, max (two - one) {order_violation:.3e}, symmetry {sym:.3e}, \
             ancilla {ancilla:.3e}, multiplicativity gap {mult:.3e}"
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_cohfrac"))
            .args([
                "sweep", "--kind", "depolarizing", "--start", "0", "--stop", "1", "--step", "0.1", "--seed", "7",
                "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(&path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    outcome(a == b && !a.is_empty(), format!("two sweeps, {} bytes each, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("qubit exactness", qubit_exactness),
        ("equality on aligned classes", equality_class),
        ("universal upper bound", universal_bound),
        ("oracle agreement", oracle_agreement),
        ("closed-form channel regression", closed_form_regression),
        ("complementarity bounds", complementarity_bounds),
        ("self-complementary closed forms", self_complementary_forms),
        ("distillable coherence relation", distillable_relation),
        ("local/global bound", local_global_bound),
        ("bipartite observations", bipartite_observations),
        ("sweep determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{tag}] {name}: {}", k + 1, result.detail);
        failed += (!result.pass) as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
