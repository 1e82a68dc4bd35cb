//! `mq-spinsim`: sweep runner and canned dataset reconstruction.
//!
//! Exit codes: 0 success, 2 argument error, 3 invariant breach in strict
//! mode, 4 I/O error.

mod options;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mq_spinsim_core::experiment::{
    reproduce_figure, run_sweep, write_figure_csvs, write_output, Figure, OutputFormat,
};
use mq_spinsim_core::SimError;

use options::RunOptions;

#[derive(Parser)]
#[command(name = "mq-spinsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one sweep over the evolution-time grid and write the results.
    Run(RunArgs),
    /// Re-run the canned sweep configurations and write plot-ready CSV
    /// files plus a full JSON result per sweep.
    Reproduce(ReproduceArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Flat key=value config file; command-line flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Chain length N (2..=12).
    #[arg(long)]
    spins: Option<usize>,

    /// Coupling model: nn (nearest-neighbor) or full (all pairs, 1/|j-k|^3).
    #[arg(long)]
    model: Option<String>,

    /// Dimensionless inverse-temperature parameter beta*||H||.
    #[arg(long = "beta-norm")]
    beta_norm: Option<f64>,

    /// Nearest-neighbor coupling constant, 1/s.
    #[arg(long = "d-nn")]
    d_nn: Option<f64>,

    /// Upper end of the dimensionless D*tau grid (starts at 0).
    #[arg(long = "tau-max")]
    tau_max: Option<f64>,

    /// Number of grid points.
    #[arg(long = "tau-steps")]
    tau_steps: Option<usize>,

    /// Pairs to track: "all" or a list like "1:2,1:8".
    #[arg(long)]
    pairs: Option<String>,

    /// Comma list drawn from: coherences, concurrence, eof.
    #[arg(long)]
    observables: Option<String>,

    /// RF offset for the detected-signal grid, rad/s; enables the signal
    /// output together with --signal-tmax and --signal-steps.
    #[arg(long = "signal-offset")]
    signal_offset: Option<f64>,

    /// End of the signal time grid, s.
    #[arg(long = "signal-tmax")]
    signal_tmax: Option<f64>,

    /// Number of signal time points.
    #[arg(long = "signal-steps")]
    signal_steps: Option<usize>,

    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,

    /// Output path.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Exit with code 3 if any invariant check fails.
    #[arg(long)]
    strict: bool,
}

#[derive(clap::Args)]
struct ReproduceArgs {
    /// Which dataset: fig1, fig2, or fig3.
    figure: String,

    /// Directory for the generated files (created if missing).
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Reproduce(args) => reproduce(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &SimError) -> u8 {
    match e {
        SimError::Argument(_) | SimError::Budget(_) => 2,
        SimError::InvariantBreach(_) | SimError::Contract(_) => 3,
        SimError::Io { .. } | SimError::Serialization(_) => 4,
        _ => 1,
    }
}

fn run(args: RunArgs) -> Result<ExitCode, SimError> {
    let opts = RunOptions::resolve(&args)?;
    let result = run_sweep(&opts.config)?;

    if result.is_flagged() {
        let s = &result.invariants.summary;
        eprintln!(
            "warning: invariant checks failed (sum rule {:.3e}, symmetry {:.3e}, \
             odd orders {:.3e}, unitarity {:.3e}, min reduced eigenvalue {:?})",
            s.max_sum_rule_residual,
            s.max_symmetry_residual,
            s.max_odd_order,
            s.max_unitarity_residual,
            s.min_reduced_eigenvalue,
        );
        if opts.strict {
            return Err(SimError::InvariantBreach(
                "run flagged by invariant checks (strict mode)".into(),
            ));
        }
    }

    write_output(&result, opts.format, &opts.out)?;
    eprintln!("wrote {}", opts.out.display());
    Ok(ExitCode::SUCCESS)
}

fn reproduce(args: ReproduceArgs) -> Result<ExitCode, SimError> {
    let figure: Figure = args.figure.parse()?;
    let results = reproduce_figure(figure)?;
    let written = write_figure_csvs(figure, &results, &args.out_dir)?;
    for (label, result) in &results {
        let path = args.out_dir.join(format!("{label}.json"));
        write_output(result, OutputFormat::Json, &path)?;
        eprintln!("wrote {}", path.display());
    }
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
