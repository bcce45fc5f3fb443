use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use phl::cli::{self, Command, Options};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Pullback,
    Milnor,
    Separated,
    Gamma,
    Tilting,
    Derived,
    Counterexample,
    Selftest,
}

/// Exact checks for rings glued along a pullback square.
///
/// SCENARIO is a path to a scenario file or the name of a bundled one
/// (E1-F2, E1-Q, E1-F101, E2, E3, E4). Exit codes: 0 pass, 1 usage or input
/// error, 2 a check failed, 3 a hypothesis was refused.
#[derive(Debug, Parser)]
#[command(name = "phl", version)]
struct Args {
    command: Cmd,
    scenario: Option<String>,
    #[arg(long)]
    dim_bound: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_support: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Print witness matrices.
    #[arg(long)]
    verbose: bool,
    /// Re-verify every returned certificate independently.
    #[arg(long)]
    recheck: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let command = Command::from_name(&format!("{:?}", args.command).to_lowercase()).expect("every subcommand is a command");
    let opts = Options {
        dim_bound: args.dim_bound,
        samples: args.samples,
        seed: args.seed,
        max_support: args.max_support,
        max_dim: args.max_dim,
        verbose: args.verbose,
        recheck: args.recheck,
    };
    let result = match (command, args.scenario.as_deref()) {
        (Command::Selftest, _) => cli::selftest(&opts),
        (_, Some(arg)) => cli::load_scenario(arg).and_then(|s| cli::run(command, &s, &opts)),
        (Command::Counterexample, None) => cli::load_scenario("E2").and_then(|s| cli::run(command, &s, &opts)),
        (_, None) => {
            eprintln!("phl {}: a scenario file or bundled name is required", command.name());
            return ExitCode::from(1);
        }
    };
    match result {
        Ok(report) => {
            let out = match args.format {
                Format::Text => report.to_text(args.verbose),
                Format::Json => report.to_json(args.verbose),
            };
            print!("{out}");
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("phl {}: {e}", command.name());
            ExitCode::from(cli::exit_code_for(&e) as u8)
        }
    }
}
