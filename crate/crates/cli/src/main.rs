//! `ncfourier`: command-line front end producing deterministic JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! is still written), 2 on usage, parse or input errors.

mod commands;
mod diagram;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ncfourier_core::error::Error;
use ncfourier_core::report::Report;

#[derive(Parser, Debug)]
#[command(name = "ncfourier", version, about = "Exact checks for NC filtrations, étale lifting, microlocalization and finite Fourier–Mukai kernels")]
struct Cli {
    /// Where to write the JSON report; `-` is standard output.
    #[arg(long, global = true, default_value = "-")]
    json: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated algebra of a presentation: basis, dimensions, NC filtration.
    Alg(AlgArgs),
    /// Étale lifting through central extensions.
    #[command(subcommand)]
    Etale(EtaleCommand),
    /// Microlocal gradings gr_(n) and degree-zero localization.
    #[command(subcommand)]
    Microloc(MicrolocCommand),
    /// Kernel calculus on a finite abelian group.
    Fm(FmArgs),
    /// Brute-force oracles; instance sizes are capped by NCF_BUDGET.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug)]
pub struct AlgArgs {
    /// Presentation file.
    #[arg(long)]
    pres: PathBuf,
    /// Largest filtration index to compute (default: the degree bound).
    #[arg(long)]
    max_d: Option<usize>,
    /// Print the canonical presentation text instead of a report.
    #[arg(long)]
    print: bool,
}

#[derive(Subcommand, Debug)]
enum EtaleCommand {
    /// Solves the lifting problem of a diagram.
    Lift {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Checks unique lifting of `alpha` against a family of diagrams.
    Check {
        /// JSON object {R, S, alpha}.
        #[arg(long)]
        alpha: PathBuf,
        /// JSON array of diagrams, or {"double_point": {count, seed, max_rank}}.
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MicrolocCommand {
    /// Builds gr_(n) and checks its structure; optionally localizes.
    Grn(GrnArgs),
}

#[derive(Args, Debug)]
pub struct GrnArgs {
    #[arg(long)]
    pres: PathBuf,
    #[arg(long)]
    n: usize,
    /// Degree-one symbol to invert, as `f=<poly>`.
    #[arg(long)]
    localize: Option<String>,
    /// Second element of A_1 with the same symbol; the two localizations
    /// are compared.
    #[arg(long, requires = "localize")]
    lift: Option<String>,
    /// Truncation order of the localization (default: the degree bound).
    #[arg(long)]
    order: Option<usize>,
    /// Largest twist in the shift-bimodule tower.
    #[arg(long, default_value_t = 2)]
    max_shift: usize,
}

#[derive(Args, Debug)]
pub struct FmArgs {
    /// Group, e.g. `Z4xZ2`.
    #[arg(long)]
    group: String,
    /// Generators, e.g. `shift=(1,0);twist=(0,1)`.
    #[arg(long, default_value = "")]
    algebra: String,
    /// Comma-separated: all, poincare, exchange, algebra, transform,
    /// double, modules, kernels.
    #[arg(long, default_value = "all")]
    check: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random modules and kernels.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Largest admissible rank of the generated algebra.
    #[arg(long, default_value_t = 256)]
    max_rank: usize,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// F^d by enumerating composition products.
    Filtration {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        max_d: Option<usize>,
    },
    /// Character sums and P∘Q, Q∘P.
    Orthogonality {
        #[arg(long)]
        group: String,
    },
    /// Associativity of composition against naive triple sums.
    Assoc {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

enum Output {
    Report(Report),
    Text(String),
}

fn run(cli: &Cli) -> Result<Output, Error> {
    Ok(match &cli.command {
        Command::Alg(a) => {
            let pres = ncfourier_core::dsl::parse_presentation(&read(&a.pres)?)?;
            if a.print {
                Output::Text(pres.to_dsl())
            } else {
                Output::Report(commands::alg(&pres, a.max_d)?)
            }
        }
        Command::Etale(EtaleCommand::Lift { diagram }) => Output::Report(commands::etale_lift(&read(diagram)?)?),
        Command::Etale(EtaleCommand::Check { alpha, family }) => {
            Output::Report(commands::etale_check(&read(alpha)?, &read(family)?)?)
        }
        Command::Microloc(MicrolocCommand::Grn(g)) => {
            let pres = ncfourier_core::dsl::parse_presentation(&read(&g.pres)?)?;
            Output::Report(commands::grn(&pres, g)?)
        }
        Command::Fm(f) => Output::Report(commands::fm(f)?),
        Command::Oracle(o) => {
            let budget = ncfourier_core::oracle::budget_from_env()?;
            Output::Report(match o {
                OracleCommand::Filtration { pres, max_d } => {
                    let pres = ncfourier_core::dsl::parse_presentation(&read(pres)?)?;
                    let d = max_d.unwrap_or(pres.bound);
                    ncfourier_core::oracle::filtration_oracle(&pres, d, budget)?
                }
                OracleCommand::Orthogonality { group } => {
                    let g = ncfourier_core::dsl::parse_group(group)?;
                    ncfourier_core::oracle::orthogonality_oracle(&g, budget)?
                }
                OracleCommand::Assoc { group, count, seed } => {
                    let g = ncfourier_core::dsl::parse_group(group)?;
                    ncfourier_core::oracle::assoc_oracle(&g, *count, *seed, budget)?
                }
            })
        }
    })
}

fn emit(target: &str, text: &str) -> Result<(), Error> {
    if target == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(target, text).map_err(|e| Error::InvalidInput(format!("cannot write {target}: {e}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, passed) = match run(&cli) {
        Ok(Output::Report(r)) => (r.to_json(), r.passed()),
        Ok(Output::Text(t)) => (t, true),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli.json, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
