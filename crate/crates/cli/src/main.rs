use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crtkit_cli::format::{parse_algebra, parse_congruences};
use crtkit_cli::{budget_from_env, read_file, CliError, Method, Report, EXIT_ERROR};
use crtkit_core::DEFAULT_SEARCH_BUDGET;

/// Chinese Remainder tuples of congruences of finite algebras.
#[derive(Parser)]
#[command(name = "crtkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a tuple of congruences is a CR tuple.
    Check {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        congs: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Two-element algebra generating a variety that contains the input.
        #[arg(long)]
        generator: Option<PathBuf>,
    },
    /// Build the hard instance for a 3SAT' formula.
    GenHard {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Add a left-zero semigroup operation `mul`.
        #[arg(long)]
        semigroup: bool,
        /// Double the universe with `neg`, `0`, `1`.
        #[arg(long)]
        u_embed: bool,
    },
    /// Classify a two-element algebra.
    Classify2 {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// List the congruence lattice.
    Conlat {
        #[arg(long)]
        algebra: PathBuf,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let budget = budget_from_env()?;
    match cli.command {
        Command::Check {
            algebra,
            congs,
            method,
            generator,
        } => {
            let alg = parse_algebra(&read_file(&algebra)?)?;
            let congs = parse_congruences(&read_file(&congs)?, alg.size())?;
            let gen = generator
                .map(|g| read_file(&g).and_then(|t| parse_algebra(&t)))
                .transpose()?;
            crtkit_cli::check(
                &alg,
                &congs,
                method,
                gen.as_ref(),
                budget.unwrap_or(DEFAULT_SEARCH_BUDGET),
            )
        }
        Command::GenHard {
            cnf,
            out,
            semigroup,
            u_embed,
        } => crtkit_cli::gen_hard(&read_file(&cnf)?, &out, semigroup, u_embed),
        Command::Classify2 { algebra } => crtkit_cli::classify2(&parse_algebra(&read_file(&algebra)?)?),
        Command::Conlat { algebra } => crtkit_cli::conlat(&parse_algebra(&read_file(&algebra)?)?, budget),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{}", report.stdout);
            eprint!("{}", report.stderr);
            ExitCode::from(report.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
