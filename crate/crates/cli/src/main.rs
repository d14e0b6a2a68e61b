//! `aggsem`: stable models, fixpoints and analyses of ground aggregate
//! programs under a selectable semantics (default `ult`).
//!
//! Exit codes: 0 success, 1 semantic failure (a `check` that fails, `verify`
//! mismatches), 2 usage or parse errors, 3 capability errors.

mod commands;
mod output;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use aggsem::{Error, Program, Registry, SatisfactionRelation};
use clap::{Args, Parser, Subcommand};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "aggsem", version, about = "Semantics of ground logic programs with aggregates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Program file, or `-` for standard input.
    input: Option<PathBuf>,
    /// Comma-separated semantics: gl, triv, gz, ult, lpst, bnd, mr, flp, ultimate.
    #[arg(long, short, default_value = "ult")]
    semantics: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Largest universe accepted by exhaustive commands.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..=63))]
    max_atoms: u32,
    /// Seed for generated programs.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and pretty-print a program.
    Parse(Common),
    /// Enumerate stable models.
    Models(Common),
    /// Check whether an interpretation is a stable model.
    Check {
        #[command(flatten)]
        common: Common,
        /// Comma-separated atoms of the candidate model.
        #[arg(long, allow_hyphen_values = true)]
        model: String,
    },
    /// Kripke-Kleene fixpoint.
    Kk(Common),
    /// Well-founded fixpoint.
    Wf(Common),
    /// Stable models of several semantics side by side, with precision.
    Compare(Common),
    /// Convexity, well-behavedness and precision reports.
    Analyze(Common),
    /// Cross-check against brute-force oracles.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Number of generated programs when no input is given.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Parse(c)
            | Command::Models(c)
            | Command::Kk(c)
            | Command::Wf(c)
            | Command::Compare(c)
            | Command::Analyze(c) => c,
            Command::Check { common, .. } | Command::Verify { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Parse(_) => "parse",
            Command::Models(_) => "models",
            Command::Check { .. } => "check",
            Command::Kk(_) => "kk",
            Command::Wf(_) => "wf",
            Command::Compare(_) => "compare",
            Command::Analyze(_) => "analyze",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Failures mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Capability(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported { .. }
            | Error::NoTruthFunction(_)
            | Error::NonMonotone(_)
            | Error::AggregatesPresent
            | Error::TooLarge { .. }
            | Error::UniverseCapacity(_)
            | Error::ArithmeticOverflow => Failure::Capability(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read_input(path: &std::path::Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load(common: &Common) -> Result<Program, Failure> {
    let path = common
        .input
        .as_deref()
        .ok_or_else(|| Failure::Usage("missing input program (path or `-`)".into()))?;
    let text = read_input(path)?;
    text.parse::<Program>().map_err(|e| match e {
        Error::Parse(p) => Failure::Usage(format!("{}:{p}", path.display())),
        other => other.into(),
    })
}

type Relations = Vec<std::sync::Arc<dyn SatisfactionRelation>>;

fn relations(common: &Common) -> Result<Relations, Failure> {
    let rels = Registry::standard().resolve_list(&common.semantics)?;
    if rels.is_empty() {
        return Err(Failure::Usage("no semantics selected".into()));
    }
    Ok(rels)
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let common = cli.command.common().clone();
    let rels = relations(&common)?;
    let max_atoms = common.max_atoms as usize;
    let ctx = commands::Context {
        command: cli.command.name(),
        rels,
        max_atoms,
        json: common.json,
    };
    match &cli.command {
        Command::Verify { count, .. } if common.input.is_none() => {
            let seed = common
                .seed
                .ok_or_else(|| Failure::Usage("verify needs an input program or --seed".into()))?;
            Ok(commands::verify_generated(&ctx, seed, *count)?)
        }
        Command::Parse(_) => Ok(commands::parse(&ctx, &load(&common)?)),
        Command::Models(_) => Ok(commands::models(&ctx, &load(&common)?)?),
        Command::Check { model, .. } => Ok(commands::check(&ctx, &load(&common)?, model)?),
        Command::Kk(_) => Ok(commands::fixpoint(&ctx, &load(&common)?, false)?),
        Command::Wf(_) => Ok(commands::fixpoint(&ctx, &load(&common)?, true)?),
        Command::Compare(_) => Ok(commands::compare(&ctx, &load(&common)?)?),
        Command::Analyze(_) => Ok(commands::analyze(&ctx, &load(&common)?)?),
        Command::Verify { .. } => Ok(commands::verify(&ctx, &load(&common)?)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().write_all(outcome.text.as_bytes());
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capability(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
