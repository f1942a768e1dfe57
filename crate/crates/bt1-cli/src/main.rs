//! `bt1` — decompose, classify, and realize BT₁ group schemes in Jacobians
//! of Fermat curves and their quotients.
//!
//! Exit codes: 0 success, 1 verification or enumeration failure, 2 usage.

mod commands;
mod sweep;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "bt1", version, about = "BT1 group schemes in Jacobians: decomposition, invariants, realization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

/// Selects one curve; exactly one of the variant flags must be present
/// (fiber products take both --fiber-d and --fiber-r).
#[derive(Debug, Args)]
pub struct CurveArgs {
    /// The characteristic.
    #[arg(long)]
    pub p: u64,
    /// Quotient curve y^d = x(1-x).
    #[arg(long, value_name = "D")]
    pub quotient_d: Option<u64>,
    /// Fermat curve X^d + Y^d = 1.
    #[arg(long, value_name = "D")]
    pub fermat_d: Option<u64>,
    /// Ordinary curve (x^2-x)(z^r-1) = 1 (p = 2, r odd).
    #[arg(long, value_name = "R")]
    pub ordinary_r: Option<u64>,
    /// Fermat degree of a fiber product (with --fiber-r).
    #[arg(long, value_name = "D")]
    pub fiber_d: Option<u64>,
    /// Ordinary parameter of a fiber product (with --fiber-d).
    #[arg(long, value_name = "R")]
    pub fiber_r: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose the p-torsion of a Jacobian into its Kraft multiset.
    Decompose {
        #[command(flatten)]
        curve: CurveArgs,
        /// Enumeration budget (index-set elements); default from
        /// BT1_ENUM_BUDGET or 1000000.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Genus, p-rank, a-number, self-duality, and polarized factors.
    Invariants {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Produce an explicit curve containing the target multiset, with
    /// witnesses.
    Realize {
        /// The characteristic.
        #[arg(long)]
        p: u64,
        /// Target multiset as JSON, e.g. '{"fv":1}'.
        #[arg(long)]
        target: String,
        /// Attach the polarized factorization (target must be self-dual).
        #[arg(long)]
        polarized: bool,
        /// Verify the plan inline before printing.
        #[arg(long, value_enum)]
        verify: Option<commands::VerifyModeArg>,
        #[arg(long)]
        budget: Option<u64>,
        /// Witness-search budget (sector evaluations); default from
        /// BT1_SEARCH_BUDGET or 10000000.
        #[arg(long)]
        search_budget: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-check a stored realization plan.
    Verify {
        /// Path to a plan file produced by `realize`.
        #[arg(long)]
        plan: String,
        #[arg(long, value_enum, default_value = "witness")]
        mode: commands::VerifyModeArg,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verify the BT1 axioms for a word or a permutation-datum file over
    /// GF(p^m).
    Axioms {
        /// The characteristic.
        #[arg(long)]
        p: u64,
        /// Extension degree of the verification field.
        #[arg(long, default_value = "2")]
        m: usize,
        /// A word over {f, v}.
        #[arg(long)]
        word: Option<String>,
        /// Path to a JSON permutation datum
        /// {"elements":[...],"sector":{...},"pi":{...}}.
        #[arg(long)]
        permdata: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Stream one CSV row per curve over a (p, d) grid.
    Sweep {
        /// Comma-separated list of primes.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        /// Largest degree to include (d runs from 3, skipping d with
        /// gcd(d, p) > 1).
        #[arg(long)]
        d_max: u64,
        #[arg(long, value_enum, default_value = "quotient")]
        family: sweep::Family,
        /// Worker threads; output bytes are identical for any count.
        #[arg(long, default_value = "1")]
        workers: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
}

/// Usage errors exit 2, runtime failures (verification, budgets,
/// realizability) exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

pub fn enum_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("BT1_ENUM_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(bt1::fermat::DEFAULT_ENUM_BUDGET)
}

pub fn search_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("BT1_SEARCH_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(bt1::digits::DEFAULT_SEARCH_BUDGET)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose { curve, budget, format } => commands::decompose(&curve, enum_budget(budget), format),
        Command::Invariants { curve, budget, format } => commands::invariants(&curve, enum_budget(budget), format),
        Command::Realize { p, target, polarized, verify, budget, search_budget: sb, format } => {
            commands::realize(p, &target, polarized, verify, enum_budget(budget), search_budget(sb), format)
        }
        Command::Verify { plan, mode, budget, format } => commands::verify(&plan, mode, enum_budget(budget), format),
        Command::Axioms { p, m, word, permdata, format } => commands::axioms(p, m, word.as_deref(), permdata.as_deref(), format),
        Command::Sweep { p, d_max, family, workers, budget } => {
            sweep::run(&p, d_max, family, workers, enum_budget(budget))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
