//! Parameter sweeps of bipartite optimal coherence fractions, written as CSV or JSON.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use cohfrac::chan_analysis::{bipartite_ocf, closed_form_ocf};
use cohfrac::{Channel, ChannelSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::{fmt_sig, round_sig, CliError, CliResult, Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> CliResult<Self> {
        if !(step > 0.0) || !(start <= stop) || !start.is_finite() || !stop.is_finite() {
            return Err(CliError::Usage(format!(
                "grid needs step > 0 and start <= stop (got {start}..{stop} step {step})"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// `start, start + step, ...` up to `stop`; points are computed as
    /// `start + k * step` so they do not accumulate rounding.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| (self.start + k as f64 * self.step).min(self.stop)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub kind: String,
    pub param: String,
    pub grid: Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sides {
    OneSided,
    TwoSided,
    Both,
    /// `first(p) (x) second(q)` over the product grid.
    Cross(Axis),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub sides: Sides,
    /// Values for the parameters that are not swept, shared by both channels.
    pub fixed: BTreeMap<String, f64>,
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Named channel spec from a kind and a parameter map. Unset parameters take
/// defaults: `gamma = 1` (amplitude damping), `theta = pi/2`, `phi = 0`,
/// axis `(n1, n2, n3) = (0, 0, 1)`, `angle = 0`.
pub fn spec_from_params(kind: &str, params: &BTreeMap<String, f64>) -> CliResult<ChannelSpec> {
    let p = param(params, "p", 0.0);
    let spec = match kind {
        "depolarizing" => ChannelSpec::Depolarizing { p },
        "bit_flip" => ChannelSpec::BitFlip { p },
        "gad" => ChannelSpec::Gad {
            p,
            gamma: param(params, "gamma", 1.0),
        },
        "self_complementary" => ChannelSpec::SelfComplementary {
            theta: param(params, "theta", FRAC_PI_2),
            phi: param(params, "phi", 0.0),
        },
        "unitary" => ChannelSpec::Unitary {
            axis: [param(params, "n1", 0.0), param(params, "n2", 0.0), param(params, "n3", 1.0)],
            angle: param(params, "angle", 0.0),
        },
        "identity" => ChannelSpec::Identity { dim: 2 },
        other => return Err(CliError::Usage(format!("unknown channel kind `{other}`"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn spec_at(axis: &Axis, value: f64, fixed: &BTreeMap<String, f64>) -> CliResult<ChannelSpec> {
    let mut params = fixed.clone();
    params.insert(axis.param.clone(), value);
    spec_from_params(&axis.kind, &params)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideRow {
    pub param: f64,
    pub ocf_one_sided: Option<f64>,
    pub ocf_two_sided: Option<f64>,
    pub closed_form: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRow {
    pub p: f64,
    pub q: f64,
    pub ocf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepTable {
    Sides(Vec<SideRow>),
    Cross(Vec<CrossRow>),
}

/// Computes the sweep. Rows are evaluated in parallel and collected in grid order.
pub fn run_sweep(spec: &SweepSpec, run: &RunConfig) -> CliResult<SweepTable> {
    run.validate()?;
    let id = Channel::identity(2);
    let xs = spec.axis.grid.values();
    match &spec.sides {
        Sides::Cross(second) => {
            let points: Vec<(f64, f64)> = xs
                .iter()
                .flat_map(|&p| second.grid.values().into_iter().map(move |q| (p, q)))
                .collect();
            let rows = points
                .par_iter()
                .map(|&(p, q)| {
                    let a = Channel::from_spec(&spec_at(&spec.axis, p, &spec.fixed)?)?;
                    let b = Channel::from_spec(&spec_at(second, q, &spec.fixed)?)?;
                    let ocf = bipartite_ocf(&a, &b, &run.opt)?.value;
                    Ok(CrossRow { p, q, ocf })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(SweepTable::Cross(rows))
        }
        sides => {
            let one = matches!(sides, Sides::OneSided | Sides::Both);
            let two = matches!(sides, Sides::TwoSided | Sides::Both);
            let rows = xs
                .par_iter()
                .map(|&x| {
                    let named = spec_at(&spec.axis, x, &spec.fixed)?;
                    let ch = Channel::from_spec(&named)?;
                    let ocf_one_sided = if one { Some(bipartite_ocf(&ch, &id, &run.opt)?.value) } else { None };
                    let ocf_two_sided = if two { Some(bipartite_ocf(&ch, &ch, &run.opt)?.value) } else { None };
                    Ok(SideRow {
                        param: x,
                        ocf_one_sided,
                        ocf_two_sided,
                        closed_form: closed_form_ocf(&named).ok(),
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(SweepTable::Sides(rows))
        }
    }
}

fn cell(x: Option<f64>, digits: usize) -> String {
    x.map(|v| fmt_sig(v, digits)).unwrap_or_default()
}

/// Renders the table with every number rounded to `run.precision` significant digits.
pub fn render(table: &SweepTable, run: &RunConfig) -> String {
    let d = run.precision;
    let r = |x: f64| round_sig(x, d);
    match (table, run.format) {
        (SweepTable::Sides(rows), Format::Csv) => {
            let mut s = String::from("param,ocf_one_sided,ocf_two_sided,closed_form\n");
            for row in rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_sig(row.param, d),
                    cell(row.ocf_one_sided, d),
                    cell(row.ocf_two_sided, d),
                    cell(row.closed_form, d)
                ));
            }
            s
        }
        (SweepTable::Cross(rows), Format::Csv) => {
            let mut s = String::from("p,q,ocf\n");
            for row in rows {
                s.push_str(&format!("{},{},{}\n", fmt_sig(row.p, d), fmt_sig(row.q, d), fmt_sig(row.ocf, d)));
            }
            s
        }
        (SweepTable::Sides(rows), Format::Json) => {
            let rounded: Vec<SideRow> = rows
                .iter()
                .map(|row| SideRow {
                    param: r(row.param),
                    ocf_one_sided: row.ocf_one_sided.map(r),
                    ocf_two_sided: row.ocf_two_sided.map(r),
                    closed_form: row.closed_form.map(r),
                })
                .collect();
            serde_json::to_string_pretty(&rounded).expect("rows serialize") + "\n"
        }
        (SweepTable::Cross(rows), Format::Json) => {
            let rounded: Vec<CrossRow> = rows
                .iter()
                .map(|row| CrossRow {
                    p: r(row.p),
                    q: r(row.q),
                    ocf: r(row.ocf),
                })
                .collect();
            serde_json::to_string_pretty(&rounded).expect("rows serialize") + "\n"
        }
    }
}

/// Runs the sweep and writes it to `run.out`, or to `w` when no path is set.
pub fn cmd_sweep(spec: &SweepSpec, run: &RunConfig, w: &mut dyn Write) -> CliResult<i32> {
    let text = render(&run_sweep(spec, run)?, run);
    match &run.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?
        }
        None => w.write_all(text.as_bytes())?,
    }
    Ok(crate::EXIT_OK)
}
