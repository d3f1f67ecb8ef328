//! `rll`: batch computation, sweeps and validation runs over constrained
//! binary sequences. Emits JSON or CSV for external plotting.
//!
//! Exit codes: 0 success, 1 computation failure, 2 usage error.

mod output;
mod runspec;
mod sweep;
mod validate;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rll_core::asymptotics::{convergence_report, fit_log_correction, FitTarget};
use rll_core::bounds::{deletion_bounds, sphere_packing_rate, timing_bounds, volume_exponent};
use rll_core::capacity::{
    capacity_manhattan, capacity_r, capacity_sec, capacity_w, capacity_wr, rho_star, sec_max,
    solve_lambda,
};
use rll_core::counting::{
    census, count_manhattan, count_sec, count_total, count_two_sets, count_wr_fast,
};
use rll_core::typicality::{concentration_mass, sample_sequences, typical_profile};
use rll_core::ParamPoint;

use output::{emit, Format};
use runspec::parse_runset;

#[derive(Parser)]
#[command(
    name = "rll",
    version,
    about = "Constrained-sequence counts, capacities and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts: totals, single (w, r) cells, or full censuses
    Count(CountArgs),
    /// Capacity functions, point evaluations or grid sweeps
    Capacity(CapacityArgs),
    /// Typical parameters, concentration masses, and sampling
    Typical(TypicalArgs),
    /// Named invariant suites; exits non-zero on any failure
    Validate(ValidateArgs),
    /// Channel-code bound calculators
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct CountArgs {
    /// Run-length set: comma list `1,2,5` or `interval:lo:hi` (hi may be `inf`)
    #[arg(long)]
    runset: Option<String>,
    /// Separate constraint for runs of zeros (with --runset1)
    #[arg(long)]
    runset0: Option<String>,
    /// Separate constraint for runs of ones (with --runset0)
    #[arg(long)]
    runset1: Option<String>,
    /// Sub-block constraint `lb:wb`
    #[arg(long)]
    sec: Option<String>,
    /// Manhattan-weight alphabet size q
    #[arg(long)]
    manhattan: Option<u64>,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    w: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    /// Emit the full (w, r) census table
    #[arg(long)]
    census: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct CapacityArgs {
    #[arg(long)]
    runset: Option<String>,
    /// Constraint for runs of ones when it differs from --runset
    #[arg(long)]
    runset1: Option<String>,
    /// Sub-block constraint `lb:wb`
    #[arg(long)]
    sec: Option<String>,
    /// Manhattan-weight alphabet size q
    #[arg(long)]
    manhattan: Option<u64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Grid sweep, e.g. `--sweep omega=0.34:0.66:0.02 rho=0.5:1.0:0.02`
    #[arg(long, num_args = 1..)]
    sweep: Option<Vec<String>>,
    /// Report capacities in nats instead of bits (display conversion only)
    #[arg(long)]
    nats: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct TypicalArgs {
    #[arg(long)]
    runset: String,
    /// Also sample sequences and report empirical statistics
    #[arg(long)]
    sample: bool,
    /// Sequence length for sampling or concentration
    #[arg(long)]
    n: Option<u64>,
    /// Number of sampled sequences
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact concentration mass of the window around the typical point
    #[arg(long)]
    mass: bool,
    /// Weight window half-size (defaults to n^(3/4))
    #[arg(long)]
    dw: Option<f64>,
    /// Runs window half-size (defaults to n^(3/4))
    #[arg(long)]
    dr: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    /// oracle | identities | capacity | fit | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Largest n for the enumeration-backed suites
    #[arg(long, default_value_t = 12)]
    nmax: u64,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(subcommand)]
    which: BoundsCommand,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Deletion-correcting code sandwich for (d, k)-constrained inputs
    Deletion {
        #[arg(long)]
        d: u64,
        /// Omit for k = infinity
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        output: Option<String>,
    },
    /// Sparse-error volume exponent and sphere-packing rate
    Volume {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        output: Option<String>,
    },
    /// Timing-channel (particle shift) sandwich
    Timing {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        output: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Typical(a) => cmd_typical(a),
        Command::Validate(a) => validate::cmd_validate(&a.suite, a.nmax, a.output.as_deref()),
        Command::Bounds(a) => cmd_bounds(a),
    };
    match run {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Errors routed to exit codes: 2 for bad arguments, 1 for failed computation.
#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => write!(f, "{m}"),
        }
    }
}

impl From<rll_core::Error> for CliError {
    fn from(e: rll_core::Error) -> Self {
        use rll_core::Error::*;
        match e {
            EmptySet
            | SingletonSet
            | NonCoprime(_)
            | NonPositiveElement
            | BadInterval
            | OutOfRange(_)
            | BadParameters(_)
            | TooLarge { .. }
            | NotBlockAligned { .. }
            | MisalignedGrid(_)
            | EmptySeries => CliError::Usage(e.to_string()),
            DomainError(_) | ConvergenceFailure(_) | CapacityOutOfRange | SamplerStuck => {
                CliError::Compute(e.to_string())
            }
        }
    }
}

type CmdResult = Result<ExitCode, CliError>;

fn cmd_count(a: CountArgs) -> CmdResult {
    if let Some(spec) = &a.sec {
        let (lb, wb) = runspec::parse_pair(spec, "lb:wb")?;
        let w =
            a.w.ok_or_else(|| CliError::Usage("--sec needs --w".into()))?;
        let v = count_sec(lb, wb, a.n, w)?;
        emit(&v.to_string(), a.format, a.output.as_deref(), false)?;
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(q) = a.manhattan {
        let w =
            a.w.ok_or_else(|| CliError::Usage("--manhattan needs --w".into()))?;
        let v = count_manhattan(q, a.n, w)?;
        emit(&v.to_string(), a.format, a.output.as_deref(), false)?;
        return Ok(ExitCode::SUCCESS);
    }
    if let (Some(s0), Some(s1)) = (&a.runset0, &a.runset1) {
        let l0 = parse_runset(s0, true)?;
        let l1 = parse_runset(s1, true)?;
        let (w, r) = match (a.w, a.r) {
            (Some(w), Some(r)) => (w, r),
            _ => return Err(CliError::Usage("two-set counts need --w and --r".into())),
        };
        let v = count_two_sets(&l0, &l1, a.n, w, r);
        emit(&v.to_string(), a.format, a.output.as_deref(), false)?;
        return Ok(ExitCode::SUCCESS);
    }
    let spec = a
        .runset
        .as_deref()
        .ok_or_else(|| CliError::Usage("--runset is required".into()))?;
    let l = parse_runset(spec, false)?;
    if a.census {
        // The census path materializes the full cube; per-cell queries via
        // --w/--r use the composition fast path and scale much further.
        if a.n > 256 {
            return Err(CliError::Usage(
                "--census is capped at n = 256; query cells with --w/--r instead".into(),
            ));
        }
        let c = census(&l, a.n);
        let body = match a.format {
            Format::Csv => c.to_csv_string(),
            Format::Json => serde_json::to_string(&c.to_json()).unwrap(),
        };
        emit(&body, a.format, a.output.as_deref(), true)?;
        return Ok(ExitCode::SUCCESS);
    }
    let v = match (a.w, a.r) {
        (Some(w), Some(r)) => count_wr_fast(&l, a.n, w, r),
        (Some(w), None) => rll_core::counting::count_weight_marginal(&l, a.n, w),
        (None, Some(r)) => rll_core::counting::count_runs_marginal(&l, a.n, r),
        (None, None) => count_total(&l, a.n),
    };
    emit(&v.to_string(), a.format, a.output.as_deref(), false)?;
    Ok(ExitCode::SUCCESS)
}

fn scale(nats: bool) -> f64 {
    if nats {
        std::f64::consts::LN_2
    } else {
        1.0
    }
}

fn cmd_capacity(a: CapacityArgs) -> CmdResult {
    let k = scale(a.nats);
    if let Some(spec) = &a.sec {
        let (lb, wb) = runspec::parse_pair(spec, "lb:wb")?;
        let omega = a
            .omega
            .ok_or_else(|| CliError::Usage("--sec capacity needs --omega".into()))?;
        let res = capacity_sec(lb, wb, omega)?;
        let (ws, smax) = sec_max(lb, wb)?;
        let mut v = res.to_json();
        v["sigma"] = scale_sigma(&v["sigma"], k);
        v["omega_star"] = json!(ws);
        v["sigma_max"] = json!(smax * k);
        emit(
            &serde_json::to_string(&v).unwrap(),
            Format::Json,
            a.output.as_deref(),
            true,
        )?;
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(q) = a.manhattan {
        let omega = a
            .omega
            .ok_or_else(|| CliError::Usage("--manhattan capacity needs --omega".into()))?;
        let res = capacity_manhattan(q, omega)?;
        let mut v = res.to_json();
        v["sigma"] = scale_sigma(&v["sigma"], k);
        emit(
            &serde_json::to_string(&v).unwrap(),
            Format::Json,
            a.output.as_deref(),
            true,
        )?;
        return Ok(ExitCode::SUCCESS);
    }
    let spec = a
        .runset
        .as_deref()
        .ok_or_else(|| CliError::Usage("--runset is required".into()))?;
    let l = parse_runset(spec, false)?;

    if let Some(parts) = &a.sweep {
        let grid = sweep::parse_sweep(parts)?;
        let body = sweep::run_sweep(&l, a.runset1.as_deref(), &grid, k)?;
        emit(&body, Format::Csv, a.output.as_deref(), true)?;
        return Ok(ExitCode::SUCCESS);
    }

    let value = match (a.omega, a.rho) {
        (Some(w), Some(r)) => {
            let p = ParamPoint::new(w, r).map_err(|e| CliError::Usage(e.to_string()))?;
            let res = match &a.runset1 {
                Some(s1) => {
                    let l1 = parse_runset(s1, false)?;
                    rll_core::capacity::capacity_two_sets(&l, &l1, p)?
                }
                None => capacity_wr(&l, p)?,
            };
            let mut v = res.to_json();
            v["sigma"] = scale_sigma(&v["sigma"], k);
            v
        }
        (Some(w), None) => {
            let res = capacity_w(&l, w)?;
            let mut v = res.to_json();
            v["sigma"] = scale_sigma(&v["sigma"], k);
            v
        }
        (None, Some(r)) => {
            let res = capacity_r(&l, r)?;
            let mut v = res.to_json();
            v["sigma"] = scale_sigma(&v["sigma"], k);
            v
        }
        (None, None) => {
            let lambda = solve_lambda(&l)?;
            json!({
                "lambda": lambda,
                "sigma": -lambda.log2() * k,
                "rho_star": rho_star(&l)?,
            })
        }
    };
    emit(
        &serde_json::to_string(&value).unwrap(),
        Format::Json,
        a.output.as_deref(),
        true,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn scale_sigma(v: &serde_json::Value, k: f64) -> serde_json::Value {
    match v.as_f64() {
        Some(x) => json!(x * k),
        None => v.clone(), // "-inf" sentinel
    }
}

fn cmd_typical(a: TypicalArgs) -> CmdResult {
    let l = parse_runset(&a.runset, false)?;
    let profile = typical_profile(&l)?;
    let mut v = profile.to_json();
    if a.mass {
        let n =
            a.n.ok_or_else(|| CliError::Usage("--mass needs --n".into()))?;
        let default_w = (n as f64).powf(0.75);
        let dw = a.dw.unwrap_or(default_w);
        let dr = a.dr.unwrap_or(default_w);
        let mass = concentration_mass(&l, n, (dw, dr))?;
        v["concentration"] = json!({"n": n, "dw": dw, "dr": dr, "mass": mass});
    }
    if a.sample {
        let n =
            a.n.ok_or_else(|| CliError::Usage("--sample needs --n".into()))?;
        let stats = sample_sequences(&l, n, a.count, a.seed)?;
        if a.format == Format::Csv {
            let body = stats.histogram_csv(&profile.run_dist);
            emit(&body, Format::Csv, a.output.as_deref(), true)?;
            return Ok(ExitCode::SUCCESS);
        }
        v["sample"] = stats.to_json();
    }
    emit(
        &serde_json::to_string(&v).unwrap(),
        Format::Json,
        a.output.as_deref(),
        true,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(a: BoundsArgs) -> CmdResult {
    let (value, output) = match a.which {
        BoundsCommand::Deletion { d, k, n, t, output } => {
            (deletion_bounds(d, k, n, t)?.to_json(), output)
        }
        BoundsCommand::Volume { d, rho, output } => {
            let v = volume_exponent(d, rho)?;
            let rate = sphere_packing_rate(d, rho)?;
            (
                json!({"d": d, "rho": rho, "volume_exponent": v, "sphere_packing_rate": rate}),
                output,
            )
        }
        BoundsCommand::Timing { q, n, t, output } => (timing_bounds(q, n, t)?.to_json(), output),
    };
    emit(
        &serde_json::to_string(&value).unwrap(),
        Format::Json,
        output.as_deref(),
        true,
    )?;
    Ok(ExitCode::SUCCESS)
}

// Referenced by the validate suite for fit checks.
pub(crate) fn fit_suite_entry(
    l: &rll_core::RunSet,
    target: FitTarget,
    ns: &[u64],
) -> Result<f64, CliError> {
    Ok(fit_log_correction(l, target, ns)?.fitted_log_coefficient)
}

pub(crate) fn convergence_entry(l: &rll_core::RunSet, ns: &[u64]) -> Result<f64, CliError> {
    Ok(convergence_report(l, ns)?.max_gap_times_n)
}
