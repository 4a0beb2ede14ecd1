mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leavitt_core::scalars::FieldKind;

use crate::error::CliError;

/// Leavitt path algebras of finite graphs: structure, normal forms and
/// dimension functions.
#[derive(Parser, Debug)]
#[command(name = "leavitt", version)]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed of the random generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sampled rounds.
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Candidate budget for searches.
    #[arg(long, global = true, default_value_t = 1000)]
    pub budget: usize,
    /// Largest logical matrix size in sampling.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_size: usize,
    /// Coefficient field: Q, Q(i) or F_p.
    #[arg(long, global = true, default_value = "Q")]
    pub field: FieldKind,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cycles, exits and the no-exit / noetherian / extending verdicts.
    Analyze { graph: PathBuf },
    /// Block decomposition of the algebra.
    Structure { graph: PathBuf },
    /// Normal form of an element under both rewriting strategies.
    Reduce {
        graph: PathBuf,
        #[arg(short = 'e', long = "element")]
        element: String,
    },
    /// Dimension of an idempotent matrix or of a presented module.
    Dim {
        graph: PathBuf,
        /// Matrix file or inline element.
        #[arg(long, conflicts_with_all = ["presentation", "element"])]
        idempotent: Option<String>,
        /// Presentation file: `{"n": .., "relations": [[..]]}` or a block matrix.
        #[arg(long, conflicts_with = "element")]
        presentation: Option<PathBuf>,
        #[arg(short = 'e', long = "element")]
        element: Option<String>,
    },
    /// Torsion closure of a presented module.
    Closure {
        graph: PathBuf,
        presentation: PathBuf,
    },
    /// Algebraic (and optionally *-) equivalence of two idempotents.
    Equiv {
        graph: PathBuf,
        /// Matrix file or inline element.
        p: String,
        /// Matrix file or inline element.
        q: String,
        /// Also search for a *-equivalence witness.
        #[arg(long)]
        star: bool,
    },
    /// Sampled checks of the dimension axioms.
    Axioms { graph: PathBuf },
    /// The graph whose algebra is `M_n` of the given one.
    MatrixGraph {
        graph: PathBuf,
        #[arg(short = 'n', default_value_t = 2)]
        n: usize,
    },
    /// The non-Rickart-* idempotent over the tail graph, checked end to end.
    #[command(name = "paper-example")]
    RickartExample,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, e)) => {
            print!("{out}");
            eprintln!("leavitt: {e}");
            ExitCode::from(CliError::exit_code(&e) as u8)
        }
    }
}
