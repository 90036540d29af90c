use std::process::ExitCode;

use clap::{Parser, Subcommand};

use trisum::harness::{
    compute_command, emit_reports, run_checks, Check, ComputeArgs, Entity, Format,
};
use trisum::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "trisum", version)]
#[command(about = "Exact verification of triangular-number representation identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify an identity (theorem, lemma1, lemma2, product, logseries,
    /// binomial, oracle) or all of them.
    Verify {
        /// Check name, or `all`.
        check: String,

        /// Largest instance to verify (defaults differ per check).
        #[arg(long)]
        bound: Option<usize>,

        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,

        #[arg(long, default_value = "table")]
        format: Format,

        /// Corrupt one representation count before verifying.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },

    /// Print one exact quantity.
    Compute {
        /// psi, trep, divsum, bell or rhs.
        entity: Entity,

        #[arg(long = "n")]
        n: Option<usize>,

        #[arg(long = "r")]
        r: Option<usize>,

        #[arg(long = "k")]
        k: Option<usize>,

        #[arg(long)]
        order: Option<usize>,
    },
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownCheck(_) | Error::MissingArgument(_) | Error::OutOfRange { .. }
    )
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    if usage_error(&e) {
        ExitCode::from(EXIT_USAGE)
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn verify(
    check: &str,
    bound: Option<usize>,
    jobs: usize,
    format: Format,
    inject_fault: bool,
) -> Result<bool, Error> {
    let checks: Vec<Check> = if check == "all" {
        Check::ALL.to_vec()
    } else {
        vec![check.parse()?]
    };
    let requests: Vec<(Check, usize)> = checks
        .into_iter()
        .map(|c| (c, bound.unwrap_or_else(|| c.default_bound())))
        .collect();
    let reports = run_checks(&requests, jobs, inject_fault)?;
    print!("{}", emit_reports(&reports, format));
    Ok(reports.iter().all(|r| r.passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            check,
            bound,
            jobs,
            format,
            inject_fault,
        } => match verify(&check, bound, jobs, format, inject_fault) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(EXIT_FAILURE),
            Err(e) => fail(e),
        },
        Command::Compute {
            entity,
            n,
            r,
            k,
            order,
        } => match compute_command(entity, &ComputeArgs { n, r, k, order }) {
            Ok(text) => {
                println!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}
