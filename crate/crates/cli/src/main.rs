//! `rspd`: generate rotated sphere packing designs, evaluate designs, run
//! benchmark grids and check the magic-angle bounds.
//!
//! Exit codes: 0 ok, 2 usage, 3 resource limit, 4 parse error, 5 property
//! failure, 1 anything else.

mod bench;
mod cmd;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "rspd", version, about = "Rotated sphere packing designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design and write it with its provenance.
    Generate(cmd::GenerateArgs),
    /// Evaluate criteria on a design file.
    Evaluate(cmd::EvaluateArgs),
    /// Run methods over a grid of dimensions and write one row per criterion.
    Benchmark(bench::BenchmarkArgs),
    /// Check the magic-angle gap bounds and the minimum-vector property.
    MagicCheck(cmd::MagicCheckArgs),
}

/// Failure of a command, mapped onto the exit-code table.
#[derive(Debug)]
pub enum CliError {
    Core(rspd::Error),
    Usage(String),
    Property(String),
}

impl From<rspd::Error> for CliError {
    fn from(e: rspd::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(rspd::Error::Domain(_)) => 2,
            CliError::Core(rspd::Error::Resource { .. }) => 3,
            CliError::Core(rspd::Error::Parse { .. }) => 4,
            CliError::Property(_) => 5,
            CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Property(m) => f.write_str(m),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RSPD_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "RSPD_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Generate(args) => cmd::generate(&args),
        Command::Evaluate(args) => cmd::evaluate(&args),
        Command::Benchmark(args) => bench::run(&args),
        Command::MagicCheck(args) => cmd::magic_check(&args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rspd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
