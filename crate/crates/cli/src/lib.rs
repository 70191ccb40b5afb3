//! Command implementations behind the `cohfrac` binary. Each command writes its
//! report to a caller-supplied writer and returns the process exit code:
//! 0 success, 1 property violation, 2 bad input or unwritable output,
//! 3 optimizer did not converge (the value is still printed).

use std::io::Write;
use std::path::{Path, PathBuf};

use cohfrac::chan_analysis::{
    closed_form_decohering_power, closed_form_ocf, cohering_power, decohering_power, optimal_coherence_fraction,
    ComplementarityReport,
};
use cohfrac::fraction::{coherence_fraction, coherence_fraction_upper_bound, distillable_coherence_pure_qubit};
use cohfrac::io::{read_channel_file, read_state_file};
use cohfrac::measures::{check_phase_alignment, ALIGNMENT_TOL};
use cohfrac::OptimizerConfig;
use serde_json::json;
use thiserror::Error;

pub mod sweep;
pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", input_message(.0))]
    Input(#[from] cohfrac::Error),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("invalid arguments: {0}")]
    Usage(String),
}

/// Diagnostic that always leads with the violated invariant's name.
fn input_message(e: &cohfrac::Error) -> String {
    let text = e.to_string();
    if text.starts_with(e.kind_name()) {
        text
    } else {
        format!("{}: {text}", e.kind_name())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `Csv` renders key/value reports as plain text lines.
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "csv" | "text" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub opt: OptimizerConfig,
    pub format: Format,
    /// Significant digits in printed numbers.
    pub precision: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            opt: OptimizerConfig::default(),
            format: Format::Csv,
            precision: 9,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !(3..=17).contains(&self.precision) {
            return Err(CliError::Usage(format!("precision {} not in [3, 17]", self.precision)));
        }
        self.opt.validate()?;
        Ok(())
    }
}

/// Rounds to `digits` significant digits and prints the shortest decimal
/// that reads back as the rounded value.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    round_sig(x, digits).to_string()
}

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("float formatting round-trips");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn emit(w: &mut dyn Write, run: &RunConfig, pairs: &[(&str, serde_json::Value)]) -> CliResult<()> {
    match run.format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&map).expect("json values serialize"))?;
        }
        Format::Csv => {
            for (k, v) in pairs {
                let text = match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                writeln!(w, "{k}: {text}")?;
            }
        }
    }
    Ok(())
}

fn num(x: f64, run: &RunConfig) -> serde_json::Value {
    json!(round_sig(x, run.precision))
}

/// Coherence fraction report for a state file.
pub fn cmd_fraction(input: &Path, run: &RunConfig, w: &mut dyn Write) -> CliResult<i32> {
    run.validate()?;
    let rho = read_state_file(input)?;
    let r = coherence_fraction(&rho, &run.opt);
    let aligned = check_phase_alignment(&rho, ALIGNMENT_TOL).aligned;
    let phases: Vec<serde_json::Value> = r.argmax_phases.angles().iter().map(|&a| num(a, run)).collect();
    let mut pairs = vec![
        ("dim", json!(rho.dim())),
        ("value", num(r.value, run)),
        ("argmax_phases", json!(phases)),
        ("upper_bound", num(coherence_fraction_upper_bound(&rho), run)),
        ("aligned", json!(aligned)),
    ];
    if rho.dim() == 2 {
        let dc = distillable_coherence_pure_qubit(r.value.clamp(0.5, 1.0))?;
        pairs.push(("distillable_coherence", num(dc, run)));
    }
    pairs.push(("converged", json!(r.converged)));
    emit(w, run, &pairs)?;
    Ok(if r.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

/// Channel report: optimal coherence fraction, powers, complementarity and,
/// for named channels, the closed forms with their gaps.
pub fn cmd_channel(channel: &Path, run: &RunConfig, w: &mut dyn Write) -> CliResult<i32> {
    run.validate()?;
    let ch = read_channel_file(channel)?;
    let ocf = optimal_coherence_fraction(&ch, &run.opt)?;
    let d = decohering_power(&ch, &run.opt)?;
    let cp = cohering_power(&ch, &run.opt)?;
    let kind = ch.spec().map_or("kraus", |s| s.kind_name());
    let mut pairs = vec![
        ("kind", json!(kind)),
        ("dim", json!(ch.dim())),
        ("ocf", num(ocf.value, run)),
        ("method", json!(ocf.method.name())),
        ("decohering_power", num(d, run)),
        ("cohering_power", num(cp, run)),
    ];
    if ch.dim() == 2 {
        let rep = ComplementarityReport::from_values(ocf.value, d);
        pairs.push(("sum", num(rep.sum, run)));
        pairs.push(("bounds_hold", json!(rep.bounds_hold)));
    }
    if let Some(spec) = ch.spec() {
        if let (Ok(f), Ok(dd)) = (closed_form_ocf(spec), closed_form_decohering_power(spec)) {
            pairs.push(("closed_form_ocf", num(f, run)));
            pairs.push(("closed_form_decohering_power", num(dd, run)));
            pairs.push(("ocf_gap", num((f - ocf.value).abs(), run)));
            pairs.push(("decohering_gap", num((dd - d).abs(), run)));
        }
    }
    pairs.push(("converged", json!(ocf.converged)));
    emit(w, run, &pairs)?;
    Ok(if ocf.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

/// Runs a command and maps errors to the exit-code contract, printing the
/// diagnostic to `err`.
pub fn exit_code(result: CliResult<i32>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.75, 9), "0.75");
        assert_eq!(fmt_sig(0.1 + 0.2, 9), "0.3");
        assert_eq!(fmt_sig(1.0 / 3.0, 3), "0.333");
        assert_eq!(fmt_sig(0.0, 9), "0");
        assert_eq!(fmt_sig(-2.5e-12, 4), "-0.0000000000025");
    }

    #[test]
    fn precision_range() {
        let mut run = RunConfig::default();
        run.precision = 2;
        assert!(run.validate().is_err());
        run.precision = 17;
        assert!(run.validate().is_ok());
    }
}
