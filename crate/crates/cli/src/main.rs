use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rlnc_tdd::SimulationMode;
use rlnc_tdd_cli::commands::{evaluate_csv, optimize, simulate_csv};
use rlnc_tdd_cli::table::cache_dir;
use rlnc_tdd_cli::{CliError, PolicyTable, Result, Scenario};

/// Energy-optimal network coding over half-duplex (TDD) links.
#[derive(Parser)]
#[command(name = "rlnc-tdd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute optimal burst-length tables.
    Optimize(Common),
    /// Mean energy and time of TDD-E, TDD-T and full duplex as CSV.
    Evaluate(Common),
    /// Monte Carlo check of the analytic means as CSV.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Policy table to use instead of optimizing.
    #[arg(long)]
    policy: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// model-faithful, persistent-dof or symbol-level.
    #[arg(long)]
    mode: Option<SimulationMode>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn supplied(path: Option<&Path>) -> Result<Option<PolicyTable>> {
    path.map(PolicyTable::read).transpose()
}

fn run(cli: Cli) -> Result<()> {
    let cache = cache_dir();
    let cache = cache.as_deref();
    match cli.command {
        Command::Optimize(args) => {
            if args.policy.is_some() {
                eprintln!("warning: --policy is ignored by optimize");
            }
            let scenario = Scenario::from_path(&args.config)?;
            let result = optimize(&scenario, cache)?;
            emit(args.out.as_deref(), &result.to_json())?;
            if args.out.is_some() {
                print!("{}", result.summary());
            } else {
                eprint!("{}", result.summary());
            }
            Ok(())
        }
        Command::Evaluate(args) => {
            let scenario = Scenario::from_path(&args.config)?;
            let table = supplied(args.policy.as_deref())?;
            let csv = evaluate_csv(&scenario, table.as_ref(), cache)?;
            emit(args.out.as_deref(), &csv)
        }
        Command::Simulate(args) => {
            let mut scenario = Scenario::from_path(&args.common.config)?;
            let sim = &mut scenario.simulation;
            sim.seed = args.seed.or(sim.seed);
            sim.trials = args.trials.or(sim.trials);
            sim.mode = args.mode.or(sim.mode);
            let config = scenario.simulation.resolve()?;
            let table = supplied(args.common.policy.as_deref())?;
            let csv = simulate_csv(&scenario, &config, table.as_ref(), cache)?;
            emit(args.common.out.as_deref(), &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
