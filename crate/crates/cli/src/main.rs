//! `extcone`: exact extendibility, entanglement-breaking and product-of-simplices checks
//! on polyhedral cones read from plain-text files.
//!
//! Exit status: 0 affirmative verdict, 1 negative verdict, 2 usage or parse error,
//! 3 input that parses but is not a valid instance.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::ReportFormat;

#[derive(Parser, Debug)]
#[command(
    name = "extcone",
    version,
    about = "Exact checks on tensor products of polyhedral cones"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    report: ReportFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prints the dual cone as a cone file.
    Dualize { file: PathBuf },
    /// Decides membership of a point in the k-th extendibility cone.
    ExtCheck {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Tensor file with shape `dim(A) dim(B)`.
        #[arg(long)]
        point: PathBuf,
    },
    /// Decides whether the reduction map at level k is entanglement-breaking.
    EbCheck {
        #[arg(long)]
        cone_b: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Recognizes a polytope (or the base of a cone) as a product of simplices.
    Factor {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
    /// Checks that disjoint facet families have disjoint affine hulls.
    Theorem3 {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
    /// Decides membership of a point in the minimal tensor product.
    MinCheck {
        #[arg(long)]
        cone_a: PathBuf,
        #[arg(long)]
        cone_b: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// Finds the least level of the dual hierarchy certifying an interior max-point.
    Hierarchy {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = extcone::extend::DEFAULT_MAX_LEVEL as u32, value_parser = clap::value_parser!(u32).range(1..))]
        max_level: u32,
    },
    /// Verifies the qutrit counterexample in exact arithmetic.
    QuantumDemo,
    /// Searches for a point of the k-th extendibility cone outside the minimal product.
    GapSearch {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
}

#[derive(clap::Args, Debug)]
struct PairArgs {
    #[arg(long)]
    cone_a: PathBuf,
    /// Cone file for B; its `phi` line is the base functional unless `--phi` is given.
    #[arg(long)]
    cone_b: PathBuf,
    /// Base functional overriding the one in the B file, e.g. "1 1/5 0".
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli.command) {
        Ok((report, outcome)) => {
            print!("{}", report.render(cli.report));
            ExitCode::from(outcome as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
