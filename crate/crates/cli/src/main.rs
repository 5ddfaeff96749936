//! `quadpencil`: discriminants, stability verdicts, semistable reduction and
//! central-fibre diagnostics for pencil files.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quadpencil_core::{Error, PencilFile, SearchBudget};

#[derive(Parser)]
#[command(name = "quadpencil", version, about = "Pencils of quadrics over k[[t]]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determinant form, discriminant and its t-adic valuation.
    Disc(Common),
    /// Semistability verdict with witness or certificate.
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Semistable reduction with the full trace.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the reduced pencil file here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Minimum rank, plane containment and point singularity on the central fibre.
    Diagnose {
        #[command(flatten)]
        common: Common,
        /// A k-point of the central fibre, as "a1:...:an".
        #[arg(long)]
        point: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Pencil file (JSON).
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, value_name = "N", default_value_t = SearchBudget::default().max_weight_sum)]
    max_weight_sum: i64,
    /// Number of seeded random coordinate changes in the search.
    #[arg(long, value_name = "N", default_value_t = SearchBudget::default().max_random_coord_changes)]
    coord_random: usize,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "N", default_value_t = SearchBudget::default().max_reduction_steps)]
    max_steps: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_weight_sum: self.max_weight_sum,
            max_random_coord_changes: self.coord_random,
            rng_seed: self.seed,
            max_reduction_steps: self.max_steps,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DependentPencil | Error::ZeroForm | Error::ZeroPencil => 2,
        Error::NonSmoothGenericFibre => 3,
        Error::InternalInvariantViolation { .. } => 4,
        Error::PointNotOnFibre | Error::InvalidPoint(_) => 5,
        _ => 1,
    }
}

fn load(path: &PathBuf) -> Result<PencilFile, Error> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::File(format!("{}: {e}", path.display())))?;
    PencilFile::from_json(&src)
}

fn run(cli: Cli) -> Result<(), Error> {
    let (common, out) = match &cli.command {
        Command::Disc(c) => (c, report::disc(&load(&c.file)?)?),
        Command::Check { common, budget } => (common, report::check(&load(&common.file)?, &budget.budget())?),
        Command::Reduce { common, budget, out } => {
            let (rep, reduced) = report::reduce(&load(&common.file)?, &budget.budget())?;
            if let Some(path) = out {
                std::fs::write(path, reduced.to_json() + "\n")
                    .map_err(|e| Error::File(format!("{}: {e}", path.display())))?;
            }
            (common, rep)
        }
        Command::Diagnose { common, point } => (common, report::diagnose(&load(&common.file)?, point.as_deref())?),
    };
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("report serializes")),
        Format::Text => print!("{}", out.text),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
