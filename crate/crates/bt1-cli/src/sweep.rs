//! The (p, d) sweep harness: one CSV row per curve, deterministic byte
//! output for any worker count.

use crate::CliError;
use bt1::duality;
use bt1::fermat::{self, CurveSpec, CurveVariant, FermatError};
use bt1::kraft;
use clap::ValueEnum;
use rayon::prelude::*;

pub const CSV_HEADER: [&str; 9] = [
    "p", "d", "family", "genus", "p_rank", "a_number", "num_orbits", "self_dual", "multiset_json",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Quotient,
    Fermat,
}

impl Family {
    fn variant(self, d: u64) -> CurveVariant {
        match self {
            Family::Quotient => CurveVariant::FermatQuotient { d },
            Family::Fermat => CurveVariant::Fermat { d },
        }
    }
}

/// One row; budget overruns are marked in place of the computed columns,
/// never fatal.
pub fn csv_row(curve: &CurveSpec, budget: u64) -> Vec<String> {
    let (d, family) = match curve.variant {
        CurveVariant::FermatQuotient { d } => (d, "quotient"),
        CurveVariant::Fermat { d } => (d, "fermat"),
        CurveVariant::OrdinaryAs { r } => (r, "ordinary"),
        CurveVariant::FiberProduct { d, .. } => (d, "fiber_product"),
    };
    let genus = fermat::genus_of(curve);
    match fermat::decompose(curve, budget) {
        Ok(dec) => vec![
            curve.p.to_string(),
            d.to_string(),
            family.to_string(),
            genus.to_string(),
            kraft::p_rank(&dec.expanded).to_string(),
            kraft::a_number(&dec.expanded).to_string(),
            dec.num_orbits.to_string(),
            duality::is_self_dual(&dec.expanded).to_string(),
            serde_json::to_string(&dec.expanded).expect("serializable"),
        ],
        Err(FermatError::BudgetExceeded { .. }) => vec![
            curve.p.to_string(),
            d.to_string(),
            family.to_string(),
            genus.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            "BUDGET_EXCEEDED".to_string(),
        ],
        Err(other) => vec![
            curve.p.to_string(),
            d.to_string(),
            family.to_string(),
            genus.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            format!("ERROR:{other}"),
        ],
    }
}

pub fn run(primes: &[u64], d_max: u64, family: Family, workers: usize, budget: u64) -> Result<(), CliError> {
    let mut primes: Vec<u64> = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        if !is_prime(p) {
            return Err(CliError::Usage(format!("--p list contains {p}, which is not prime")));
        }
    }
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".to_string()));
    }

    let cells: Vec<(u64, u64)> = primes
        .iter()
        .flat_map(|&p| (3..=d_max).filter(move |&d| gcd(p, d) == 1).map(move |d| (p, d)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    // par_iter + collect preserves cell order, so the merge is ordered by
    // (p, d) no matter how the pool schedules the work
    let rows: Vec<Vec<String>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(p, d)| {
                let curve = CurveSpec::new(p, family.variant(d)).expect("validated cell");
                csv_row(&curve, budget)
            })
            .collect()
    });

    let mut writer = csv::Writer::from_writer(std::io::stdout());
    writer
        .write_record(CSV_HEADER)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    for row in rows {
        writer.write_record(&row).map_err(|e| CliError::Failure(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}
