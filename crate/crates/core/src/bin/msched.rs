//! `msched` — convergence runs and parameter sweeps for the quantum-search
//! scheduler. Results are written as CSV plus a JSON mirror; identical
//! config and seed always reproduce identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use msched::harness::{parse_config, run_convergence, run_sweep, write_results, ExperimentSpec};
use msched::Error;

#[derive(Parser)]
#[command(name = "msched", version, about = "Massive-MIMO scheduling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train once and log per-epoch validation results (axis=epochs).
    Converge(RunArgs),
    /// Compare methods across a users/antennas/snr grid.
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (key=value format; empty file for defaults).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output CSV path (JSON mirror is written alongside).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweep tasks; falls back to MSCHED_WORKERS, then
    /// to one thread per core.
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn load_spec(&self) -> Result<ExperimentSpec, Error> {
        let text = std::fs::read_to_string(&self.config)
            .map_err(|e| Error::io(&self.config, e))?;
        let mut spec = parse_config(&text)?;
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(out) = &self.out {
            spec.output = out.clone();
        }
        Ok(spec)
    }

    fn workers(&self) -> Result<Option<usize>, Error> {
        if let Some(n) = self.workers {
            return Ok(Some(n));
        }
        match std::env::var("MSCHED_WORKERS") {
            Ok(value) => value
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidConfig(format!("MSCHED_WORKERS=`{value}` is not an integer"))),
            Err(_) => Ok(None),
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (args, sweep) = match &cli.command {
        Command::Converge(args) => (args, false),
        Command::Sweep(args) => (args, true),
    };
    let spec = args.load_spec()?;
    let rows = if sweep {
        run_sweep(&spec, args.workers()?)?
    } else {
        run_convergence(&spec)?
    };
    let json_path = write_results(&rows, &spec.output)?;
    eprintln!(
        "wrote {} rows to {} (+ {})",
        rows.len(),
        spec.output.display(),
        json_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("msched: {err}");
            if err.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
