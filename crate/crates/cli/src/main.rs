//! `fran`: run the handover-overhead and resource-allocation experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use fran_cli::{Experiment, RunSpec};

#[derive(Parser)]
#[command(name = "fran", about = "Fog-RAN handover and resource allocation experiments")]
struct Cli {
    /// Which experiment to run: fig4, fig5, fig6, or custom.
    #[arg(long)]
    experiment: String,

    /// TOML configuration file; omitted means all defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory for <experiment>.csv and summary.txt.
    #[arg(long, env = fran_cli::OUT_DIR_ENV, default_value = "out")]
    out: PathBuf,

    /// Override the configured base seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the configured replication count.
    #[arg(long)]
    reps: Option<usize>,

    /// Suppress the summary on standard output.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let experiment: Experiment = match cli.experiment.parse() {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let spec = RunSpec {
        experiment,
        config: cli.config,
        out_dir: cli.out,
        seed: cli.seed,
        reps: cli.reps,
        quiet: cli.quiet,
    };
    match fran_cli::run(&spec) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
