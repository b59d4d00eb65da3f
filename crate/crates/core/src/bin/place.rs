use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;

use trackplace::harness::{
    emit_report, emit_summary, parse_traces, run_matrix, Algorithm, EnergyModel, ExternalSolver, Format, RunConfig,
};
use trackplace::{DbcConfig, Error};

/// Computes racetrack-memory placements for every sequence in a trace file
/// and writes a per-sequence report plus a `<out>.summary.csv` aggregate.
#[derive(Parser, Debug)]
#[command(name = "place", version)]
struct Cli {
    /// Trace file.
    file: PathBuf,
    /// Comma-separated algorithms: ofu, mwpc, chen, chen_tb, shifts_reduce, ga, bnb, ilp-export.
    #[arg(long, default_value = "ofu,chen,chen_tb,shifts_reduce,ga")]
    algos: String,
    #[arg(long, default_value = "report.csv")]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Domains per track (maximum variables per DBC).
    #[arg(long = "dbc-n", default_value_t = 64)]
    dbc_n: usize,
    /// Bits per item (tracks per DBC).
    #[arg(long, default_value_t = 32)]
    bits: u32,
    /// Directory for exported LP models; required by ilp-export.
    #[arg(long = "ilp-export")]
    ilp_export: Option<PathBuf>,
    /// External solver time limit in seconds.
    #[arg(long = "ilp-budget", default_value_t = 3 * 3600)]
    ilp_budget: u64,
    /// Branch-and-bound time limit in seconds; 0 returns the incumbent.
    #[arg(long = "bnb-budget", default_value_t = 10.0)]
    bnb_budget: f64,
    /// Leave the runtime column empty so reports are byte-reproducible.
    #[arg(long = "no-timing")]
    no_timing: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Io { .. } | Error::Capacity { .. } => 1,
        Error::Parse { .. } => 2,
        Error::Domain(_) | Error::Invariant(_) | Error::Solver(_) => 3,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let format: Format = cli.format.parse()?;
    let algos = Algorithm::parse_list(&cli.algos)?;
    if !(cli.bnb_budget.is_finite() && cli.bnb_budget >= 0.0) {
        return Err(Error::Usage(format!("invalid --bnb-budget {}", cli.bnb_budget)));
    }
    let dbc = DbcConfig::new(cli.dbc_n, cli.bits as usize).map_err(|e| Error::Usage(e.to_string()))?;
    let cfg = RunConfig {
        seed: cli.seed,
        dbc,
        energy: EnergyModel {
            bits_per_item: cli.bits,
            ..EnergyModel::default()
        },
        bnb_budget: Some(Duration::from_secs_f64(cli.bnb_budget)),
        ilp_export_dir: cli.ilp_export,
        ilp_budget: Some(Duration::from_secs(cli.ilp_budget)),
        solver: ExternalSolver::from_env()?,
        record_runtime: !cli.no_timing,
        ga: None,
    };

    let traces = parse_traces(&cli.file)?;
    let report = run_matrix(&traces, &algos, &cfg)?;
    emit_report(&report, &cli.out, format)?;
    let mut summary = cli.out.clone().into_os_string();
    summary.push(".summary.csv");
    emit_summary(&report, &PathBuf::from(summary))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
