use std::process::ExitCode;

use clap::{Parser, Subcommand};
use timebin_cli::commands::{compile, example, inspect, rate, run, track, validate, Globals};
use timebin_cli::CliResult;

/// Simulate and validate boson sampling on a time-bin loop interferometer.
#[derive(Parser)]
#[command(name = "timebin", version)]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a pulse schedule into the effective unitary.
    Compile(compile::CompileArgs),
    /// Permanent of a matrix file, printed as "re im".
    Perm(inspect::PermArgs),
    /// Output distribution over all configurations.
    Dist(inspect::DistArgs),
    /// Draw seeded events from a distribution.
    Sample(inspect::SampleArgs),
    /// Run one validator over an event log.
    Validate(validate::ValidateArgs),
    /// Distribution after each loop and fidelity to the final one.
    Track(track::TrackArgs),
    /// Full pipeline: compile, distribution, events, all validators.
    Run,
    /// n-fold coincidence rate table.
    Rate(rate::RateArgs),
    /// Write an example schedule and config.
    Example(example::ExampleArgs),
}

fn dispatch(cli: &Cli) -> CliResult<i32> {
    let g = &cli.globals;
    match &cli.command {
        Command::Compile(a) => compile::compile(a, g),
        Command::Perm(a) => inspect::perm(a),
        Command::Dist(a) => inspect::dist(a, g),
        Command::Sample(a) => inspect::sample(a, g),
        Command::Validate(a) => validate::validate(a, g),
        Command::Track(a) => track::track(a, g),
        Command::Run => run::run(g),
        Command::Rate(a) => rate::rate(a),
        Command::Example(a) => example::example(a, g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.report());
            e.code
        }
    };
    ExitCode::from(code as u8)
}
