// SPDX-License-Identifier: Apache-2.0

//! `pulsar`: synthesize, attack, defend, evaluate and sweep full-waveform LiDAR scans.

mod cmd;
mod error;
mod manifest;
mod opts;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "pulsar",
    version,
    about = "Full-waveform LiDAR jamming simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benign waveform tensor from a scene spec or point cloud.
    Synth(cmd::synth::SynthArgs),
    /// Inject a jamming pulse train and write the ground-truth mask.
    Attack(cmd::attack::AttackArgs),
    /// Run a defense and write the recovered point cloud.
    Defend(cmd::defend::DefendArgs),
    /// Score a recovered point cloud against the benign scan.
    Eval(cmd::eval::EvalArgs),
    /// Sweep defenses over group sizes on a scene suite.
    Bench(cmd::bench::BenchArgs),
}

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("PULSAR_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::usage(format!(
            "PULSAR_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("PULSAR_THREADS: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Synth(a) => cmd::synth::run(a),
        Command::Attack(a) => cmd::attack::run(a),
        Command::Defend(a) => cmd::defend::run(a),
        Command::Eval(a) => cmd::eval::run(a),
        Command::Bench(a) => cmd::bench::run(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(error::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
