//! `htsplit`: stable models, dependency graphs and splitting checks over
//! `.htsplit` problem files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod selftest;

/// Exit status: 0 success, 1 semantic failure, 2 input error, 3 resource
/// limit or inconclusive verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failed = 1,
    Input = 2,
    Inconclusive = 3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// `digraph { ... }` text for graphs; plain text elsewhere.
    DotLike,
}

#[derive(Parser, Debug)]
#[command(name = "htsplit", version, about = "Stable models, dependency graphs and splitting checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Node cap for every search; exceeding it exits with status 3.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Problem file.
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct Selection {
    /// Theory to use instead of the top-level statements.
    #[arg(long)]
    pub theory: Option<String>,
    /// Intensionality statement: a `#part` name, `top`, `bottom` or
    /// `intensional`. Defaults to the file's `#intensional` declarations, or
    /// `top` when there are none.
    #[arg(long)]
    pub lambda: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a file and print it in canonical syntax.
    Parse(Input),
    /// List the λ-stable models.
    Models {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sel: Selection,
    },
    /// List the HT-models of the theory extended with EM(λ).
    HtModels {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sel: Selection,
    },
    /// Compare two theories for strong equivalence under λ.
    StrongEq {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Apply an occurrence transform (pos, pnn or nnn) to a named formula.
    Transform {
        #[command(flatten)]
        input: Input,
        /// A `#formula` name.
        #[arg(long)]
        formula: String,
        /// Occurrence selector `pred#k` (1-based, pre-order).
        #[arg(long)]
        occurrence: String,
        #[arg(long, default_value = "pnn")]
        variant: String,
        #[arg(long)]
        context: Option<String>,
    },
    /// Build the dependency graph of a partition.
    Graph {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        split: SplitArgs,
        /// Exit 0 even when some edge conditions were undecided.
        #[arg(long)]
        allow_unknown: bool,
    },
    /// Check the splitting hypotheses, optionally verifying the conclusion.
    Split {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        split: SplitArgs,
        /// Enumerate both sides and compare them.
        #[arg(long)]
        verify: bool,
    },
    /// Run the built-in checks on the bundled examples.
    Selftest,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[arg(long)]
    pub partition: String,
    /// A `#context` block used as Ψ.
    #[arg(long, conflicts_with = "approx")]
    pub context: Option<String>,
    /// An `#approx` block used as Ψ.
    #[arg(long)]
    pub approx: Option<String>,
    /// Use the theory-level graph even when the parts are programs.
    #[arg(long)]
    pub theory_graph: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(Status::Input as u8);
        }
    }
    let status = match commands::run(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource() {
                Status::Inconclusive
            } else {
                Status::Input
            }
        }
    };
    ExitCode::from(status as u8)
}
