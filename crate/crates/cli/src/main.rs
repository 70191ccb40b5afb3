use std::collections::BTreeMap;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cohfrac::OptimizerConfig;
use cohfrac_cli::sweep::{cmd_sweep, Axis, Grid, Sides, SweepSpec};
use cohfrac_cli::verify::{cmd_verify, Suite};
use cohfrac_cli::{cmd_channel, cmd_fraction, exit_code, CliError, CliResult, Format, RunConfig};

#[derive(Parser)]
#[command(name = "cohfrac", version, about = "Coherence fraction of quantum states and channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output path (sweep file, or directory for verify failures).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv (plain text for reports) or json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Significant digits in printed numbers, 3..=17.
    #[arg(long, global = true, default_value_t = 9)]
    precision: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coordinate-ascent restarts per state.
    #[arg(long, global = true, default_value_t = 16)]
    restarts: usize,
    /// Sweep cap per ascent run.
    #[arg(long, global = true, default_value_t = 500)]
    iters: usize,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Grid points per angle for the brute-force oracle.
    #[arg(long, global = true, default_value_t = 360)]
    grid: usize,
    /// Grid points of the one-parameter qubit channel scans.
    #[arg(long, global = true, default_value_t = 720)]
    channel_grid: usize,
    /// Restarts of pure-input channel searches.
    #[arg(long, global = true, default_value_t = 32)]
    search_restarts: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Coherence fraction of a state file.
    Fraction {
        #[arg(long)]
        input: PathBuf,
    },
    /// Channel report for a channel file.
    Channel {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Run a seeded property suite.
    Verify {
        /// theorem1..theorem5, oracle, invariance, subadditivity_l1, bipartite_observations
        suite: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Sweep a channel parameter and tabulate bipartite optimal coherence fractions.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    kind: String,
    #[arg(long, default_value = "p")]
    param: String,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = 1.0)]
    stop: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// one_sided, two_sided, both or cross.
    #[arg(long, default_value = "both")]
    sides: String,
    #[arg(long)]
    cross_kind: Option<String>,
    #[arg(long, default_value = "p")]
    cross_param: String,
    #[arg(long, default_value_t = 0.0)]
    cross_start: f64,
    #[arg(long, default_value_t = 1.0)]
    cross_stop: f64,
    #[arg(long, default_value_t = 0.1)]
    cross_step: f64,
    /// Fixed parameter, e.g. gamma=1 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn run_config(c: &Common) -> CliResult<RunConfig> {
    Ok(RunConfig {
        opt: OptimizerConfig {
            restarts: c.restarts,
            max_iters: c.iters,
            tol: c.tol,
            seed: c.seed,
            grid_points: c.grid,
            channel_grid: c.channel_grid,
            search_restarts: c.search_restarts,
        },
        format: Format::parse(&c.format)?,
        precision: c.precision,
        out: c.out.clone(),
    })
}

fn sweep_spec(a: &SweepArgs) -> CliResult<SweepSpec> {
    let mut fixed = BTreeMap::new();
    for kv in &a.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| CliError::Usage(format!("--set {k}: `{v}` is not a number")))?;
        fixed.insert(k.to_string(), v);
    }
    let axis = Axis {
        kind: a.kind.clone(),
        param: a.param.clone(),
        grid: Grid::new(a.start, a.stop, a.step)?,
    };
    let sides = match a.sides.as_str() {
        "one_sided" => Sides::OneSided,
        "two_sided" => Sides::TwoSided,
        "both" => Sides::Both,
        "cross" => {
            let kind = a
                .cross_kind
                .clone()
                .ok_or_else(|| CliError::Usage("--sides cross needs --cross-kind".into()))?;
            Sides::Cross(Axis {
                kind,
                param: a.cross_param.clone(),
                grid: Grid::new(a.cross_start, a.cross_stop, a.cross_step)?,
            })
        }
        other => return Err(CliError::Usage(format!("unknown --sides `{other}`"))),
    };
    Ok(SweepSpec { axis, sides, fixed })
}

fn dispatch(cli: &Cli) -> CliResult<i32> {
    let run = run_config(&cli.common)?;
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Fraction { input } => cmd_fraction(input, &run, &mut out),
        Command::Channel { channel } => cmd_channel(channel, &run, &mut out),
        Command::Verify { suite, count } => {
            cmd_verify(Suite::parse(suite)?, &run.opt, *count, run.out.as_deref(), &mut out)
        }
        Command::Sweep(args) => cmd_sweep(&sweep_spec(args)?, &run, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = exit_code(dispatch(&cli), &mut io::stderr());
    ExitCode::from(code as u8)
}
