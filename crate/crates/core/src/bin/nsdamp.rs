use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use nsdamp::harness::{exit_code, run, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "nsdamp",
    about = "Pseudo-spectral simulator and decay-rate verifier for the damped Navier-Stokes equations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the experiment configuration.
    config: PathBuf,
    /// Override a config value by dotted path, e.g. --set solver.dt=0.01
    /// or --set sweep.beta=[1,2,3]. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Concurrent sweep workers (falls back to NSDAMP_WORKERS, then the
    /// config file, then the available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Where to write artifacts (overrides the config file).
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match execute(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code(&e) as u8)
            }
        },
    }
}

fn execute(args: RunArgs) -> nsdamp::Result<()> {
    let overrides = parse_overrides(&args.set)?;
    let mut config = ExperimentConfig::load(&args.config, &overrides)?;
    if let Some(dir) = args.output_dir {
        config.output_dir = dir.to_string_lossy().into_owned();
    }
    for warning in config.validate()? {
        eprintln!("warning: {warning}");
    }
    run(&config, args.workers)
}

fn parse_overrides(set: &[String]) -> nsdamp::Result<Vec<(String, String)>> {
    set.iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| {
                    nsdamp::Error::InvalidConfig(format!(
                        "--set expects KEY=VALUE, got '{kv}'"
                    ))
                })
        })
        .collect()
}
