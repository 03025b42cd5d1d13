use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use starbench::report::{run, Command, RunError, RunOptions};

#[derive(Parser)]
#[command(name = "starbench", version, about = "Fedosov star products, adapted quantization and Bohr-Sommerfeld checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Highest power of lambda to compute.
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Total-degree budget for the Fedosov solve.
    #[arg(long, global = true)]
    budget: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time per phase (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve for gamma and emit the star-product coefficients.
    Build { config: PathBuf },
    /// Run the full invariant suite.
    Verify { config: PathBuf },
    /// Compare two products and construct the first equivalence step.
    Equiv { first: PathBuf, second: PathBuf },
    /// Bohr-Sommerfeld spectrum from the [bs] section.
    Spectrum { config: PathBuf },
    /// Maslov index from the [maslov] section.
    Maslov { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, paths) = match cli.command {
        Cmd::Build { config } => (Command::Build, vec![config]),
        Cmd::Verify { config } => (Command::Verify, vec![config]),
        Cmd::Equiv { first, second } => (Command::Equiv, vec![first, second]),
        Cmd::Spectrum { config } => (Command::Spectrum, vec![config]),
        Cmd::Maslov { config } => (Command::Maslov, vec![config]),
    };
    let mut texts = Vec::new();
    for p in &paths {
        match std::fs::read_to_string(p) {
            Ok(t) => texts.push(t),
            Err(e) => return fail(&RunError::Parse(format!("{}: {e}", p.display()))),
        }
    }
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let opts = RunOptions {
        order: cli.flags.order,
        budget: cli.flags.budget,
        timing: cli.flags.timing,
    };
    let report = match run(command, &refs, &opts) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let body = match cli.flags.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    match &cli.flags.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        for v in report.verdicts.iter().filter(|v| !v.passed) {
            eprintln!("FAIL {}: {}", v.name, v.detail);
        }
        ExitCode::from(1)
    }
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
