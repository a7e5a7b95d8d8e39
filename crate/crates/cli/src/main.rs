//! `capset`: command-line front end for the capset toolkit.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails
//! (the evidence is in the output), 2 for usage and parse errors.

mod commands;
mod output;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "capset",
    version,
    about = "Exact computations for progression-free sets in F_p^n"
)]
struct Cli {
    /// Output format; defaults to a table on a terminal and JSON otherwise.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate c(p), p^{cn} and 3p^{cn} for n = 1..n_max.
    Bound {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Exact dim L_{n,d} with the duality cross-check.
    Dims {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d_min: Option<usize>,
        #[arg(long)]
        d_max: Option<usize>,
    },
    /// Check dim L_{n,(p-1)n/3} <= p^{cn} exactly for each n.
    EntropyCheck {
        #[arg(long)]
        p: u32,
        /// Comma-separated values of n (multiples of 3 unless --info).
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Report dim L_{n,floor((p-1)n/3)} for any n without asserting.
        #[arg(long)]
        info: bool,
    },
    /// Find a large progression-free set.
    Search(SearchArgs),
    /// Run the bound's construction on a set and print the transcript.
    Prove {
        /// Point set file (JSON or text form).
        #[arg(required_unless_present = "search", conflicts_with = "search")]
        file: Option<PathBuf>,
        /// Use a searched set instead of a file.
        #[arg(long)]
        search: bool,
        #[command(flatten)]
        search_args: OptionalSearchArgs,
    },
    /// Check whether a point set is progression-free.
    VerifySet { file: PathBuf },
    /// Re-check a saved proof transcript.
    Verify { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Greedy,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Node budget for exact mode; the result is then not necessarily optimal.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Seed for greedy mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for exact mode (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
struct OptionalSearchArgs {
    #[arg(long, requires = "search")]
    p: Option<u32>,
    #[arg(long, requires = "search")]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Exact, requires = "search")]
    mode: Mode,
    #[arg(long, requires = "search")]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0, requires = "search")]
    seed: u64,
    #[arg(long, requires = "search")]
    threads: Option<usize>,
}

fn run(cli: Cli) -> Result<output::Report, commands::CliError> {
    match cli.command {
        Command::Bound { p, n_max } => commands::bound(p, n_max),
        Command::Dims { p, n, d_min, d_max } => commands::dims(p, n, d_min, d_max),
        Command::EntropyCheck { p, n, info } => commands::entropy_check(p, &n, info),
        Command::Search(args) => commands::search(&args),
        Command::Prove {
            file,
            search,
            search_args: s,
        } => {
            if search {
                let (Some(p), Some(n)) = (s.p, s.n) else {
                    return Err(commands::CliError::Usage(
                        "--search needs --p and --n".into(),
                    ));
                };
                let args = SearchArgs {
                    p,
                    n,
                    mode: s.mode,
                    budget: s.budget,
                    seed: s.seed,
                    threads: s.threads,
                };
                commands::prove_search(&args)
            } else {
                commands::prove_file(&file.expect("clap requires a file"))
            }
        }
        Command::VerifySet { file } => commands::verify_set(&file),
        Command::Verify { file } => commands::verify(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.unwrap_or(if std::io::stdout().is_terminal() {
        Format::Table
    } else {
        Format::Json
    });
    match run(cli) {
        Ok(report) => {
            if let Err(e) = report.emit(format) {
                eprintln!("capset: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("capset: {e}");
            ExitCode::from(2)
        }
    }
}
