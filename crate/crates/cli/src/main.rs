use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dce_cli::config::ScenarioConfig;
use dce_cli::{run_all, run_one, run_scenario};

/// Slab-cavity photon-creation simulator.
#[derive(Debug, Parser)]
#[command(name = "dce", version, about)]
struct Cli {
    /// Run the shipped verification scenarios and report pass/fail.
    #[arg(long)]
    verify: bool,

    /// With --verify: run a single scenario by number (1..=10).
    #[arg(long, requires = "verify")]
    criterion: Option<u32>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the lowest eigenmodes of a static cavity.
    Spectrum(RunArgs),
    /// Sweep the slab fraction and fit first-order error orders.
    Sweep(RunArgs),
    /// Integrate a resonantly driven mode and record photon numbers.
    Evolve(RunArgs),
    /// Convert a drive scenario to laboratory SI figures.
    Estimate(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario configuration (JSON, strict schema).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the CSV tables and manifest.
    #[arg(long)]
    out: PathBuf,
}

impl Command {
    fn expected_task(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Sweep(_) => "sweep",
            Command::Evolve(_) => "evolve",
            Command::Estimate(_) => "estimate",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Spectrum(a) | Command::Sweep(a) | Command::Evolve(a) | Command::Estimate(a) => a,
        }
    }
}

fn verify(criterion: Option<u32>) -> Result<bool> {
    let reports = match criterion {
        Some(id) => {
            let Some(report) = run_one(id) else {
                bail!("no scenario numbered {id} (expected 1..=10)");
            };
            vec![report]
        }
        None => run_all(),
    };
    let mut all_passed = true;
    for report in &reports {
        println!("{}", report.line());
        all_passed &= report.passed;
    }
    println!(
        "{}/{} scenarios passed",
        reports.iter().filter(|r| r.passed).count(),
        reports.len()
    );
    Ok(all_passed)
}

fn run(cli: Cli) -> Result<bool> {
    if cli.verify {
        return verify(cli.criterion);
    }
    let Some(command) = cli.command else {
        bail!("nothing to do: pass a subcommand or --verify (see --help)");
    };
    let args = command.args();
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let config = ScenarioConfig::from_json(&text)
        .with_context(|| format!("parsing {}", args.config.display()))?;
    if config.task_name() != command.expected_task() {
        bail!(
            "config task `{}` does not match subcommand `{}`",
            config.task_name(),
            command.expected_task()
        );
    }
    run_scenario(&config, &args.out)?;
    println!(
        "{} scenario written to {}",
        config.task_name(),
        args.out.display()
    );
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
