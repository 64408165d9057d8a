use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tropdeg::commands::{exit_code, run, Command, Format, Options};
use tropdeg::hilbert::Shape;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Classes,
    Hilbert,
    Degree,
    Star,
    Verify,
    Refine,
    Oracle,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Classes => Command::Classes,
            Cmd::Hilbert => Command::Hilbert,
            Cmd::Degree => Command::Degree,
            Cmd::Star => Command::Star,
            Cmd::Verify => Command::Verify,
            Cmd::Refine => Command::Refine,
            Cmd::Oracle => Command::Oracle,
        }
    }
}

/// Tropical Hilbert functions, independence certificates and degree bounds.
#[derive(Debug, Parser)]
#[command(name = "tropdeg", version)]
struct Cli {
    command: Cmd,
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    /// Defaults to --k-min.
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long, default_value = "simplex")]
    shape: Shape,
    /// Refinement factor for `refine`.
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Search node budget; `star` runs the exhaustive upper check only when set.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Print rationals as decimals with this many digits.
    #[arg(long)]
    decimals: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let opts = Options {
        k_min: cli.k_min,
        k_max: cli.k_max.unwrap_or(cli.k_min),
        shape: cli.shape,
        r: cli.r,
        budget: cli.budget,
        seed: cli.seed,
        format: cli.format,
        decimals: cli.decimals,
    };
    let text = match std::fs::read_to_string(&cli.model) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("tropdeg: cannot read {}: {e}", cli.model.display());
            return ExitCode::from(2);
        }
    };
    match run(cli.command.into(), &text, &opts) {
        Ok(out) => {
            print!("{}", out.render(&opts));
            if out.refuted {
                for n in out.report.notes.iter().filter(|n| n.starts_with("refuted") || n.starts_with("disagreement")) {
                    eprintln!("tropdeg: {n}");
                }
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("tropdeg: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
