//! Identity checks, report rendering and the computations behind the CLI.
//!
//! Each [`Check`] evaluates one identity exactly for every instance up to a
//! bound. Instances are spread over a rayon pool of the requested size and
//! merged back in instance order, so reports do not depend on the number of
//! workers.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{
    bell_oracle, faa_di_bruno_log_derivative, lemma1_lhs_via_bell, lemma2_rhs,
    psi_derivative_point, BellTable, DerivativePoint,
};
use crate::numbers::{
    binomial_identity_sides, divisor_sum, factorial, pascal_sides, theorem_rhs, trep_oracle,
    TripRepTable,
};
use crate::series::{product_form_a, product_form_b, psi_series, TruncatedSeries};
use crate::{Error, ExactRational, Result};

/// Largest `r` compared against the enumeration oracle.
pub const ORACLE_MAX_R: usize = 5;
/// Largest `n` compared against the Bell definition sum.
pub const BELL_ORACLE_MAX_N: usize = 20;
/// Random integer points used for the Bell oracle comparison.
pub const BELL_ORACLE_RANDOM_POINTS: usize = 10;
const BELL_ORACLE_SEED: u64 = 0x7472_6973_756d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Theorem,
    Lemma1,
    Lemma2,
    Product,
    Logseries,
    Binomial,
    Oracle,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Theorem,
        Check::Lemma1,
        Check::Lemma2,
        Check::Product,
        Check::Logseries,
        Check::Binomial,
        Check::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Theorem => "theorem",
            Check::Lemma1 => "lemma1",
            Check::Lemma2 => "lemma2",
            Check::Product => "product",
            Check::Logseries => "logseries",
            Check::Binomial => "binomial",
            Check::Oracle => "oracle",
        }
    }

    pub fn default_bound(self) -> usize {
        match self {
            Check::Theorem => 300,
            Check::Lemma1 | Check::Lemma2 => 60,
            Check::Product => 2000,
            Check::Logseries => 500,
            Check::Binomial => 100,
            Check::Oracle => 30,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_owned()))
    }
}

/// One identity instance that did not hold.
///
/// `indices` locate the instance. Checks that cover several identity
/// families append a family number as the last index:
///
/// | check    | indices                                                        |
/// |----------|----------------------------------------------------------------|
/// | theorem  | `[n]`                                                          |
/// | lemma1   | `[n, 1]` Bell sum vs divisor sum, `[n, 2]` Faà di Bruno vs log |
/// | lemma2   | `[n, k]`                                                       |
/// | product  | `[n, 1]` first product form, `[n, 2]` second product form      |
/// | logseries| `[n]`                                                          |
/// | binomial | `[n, r, 1]` summation identity, `[k, r, 2]` Pascal's rule      |
/// | oracle   | `[n, r, 0]` counts, `[n, k, p]` Bell at point `p` (1 = Ψ)      |
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub indices: Vec<u64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(rename = "check")]
    pub check_name: String,
    pub bound: u64,
    pub total_cases: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shared read-only tables, built once at the largest bound any requested
/// check needs.
#[derive(Debug, Clone)]
pub struct Tables {
    pub trep: TripRepTable,
    pub bell: BellTable,
    pub psi: TruncatedSeries,
}

impl Tables {
    pub fn for_checks(requests: &[(Check, usize)]) -> Self {
        let mut trep_n = 0;
        let mut trep_r = 0;
        let mut bell_n = 0;
        let mut psi_order = 0;
        for &(check, bound) in requests {
            match check {
                Check::Theorem => {
                    trep_n = trep_n.max(bound);
                    trep_r = trep_r.max(bound);
                }
                Check::Lemma1 => {
                    bell_n = bell_n.max(bound);
                    psi_order = psi_order.max(bound);
                }
                Check::Lemma2 => {
                    bell_n = bell_n.max(bound);
                    trep_n = trep_n.max(bound);
                    trep_r = trep_r.max(bound);
                }
                Check::Product | Check::Logseries => psi_order = psi_order.max(bound),
                Check::Binomial => {}
                Check::Oracle => {
                    trep_n = trep_n.max(bound);
                    trep_r = trep_r.max(ORACLE_MAX_R);
                }
            }
        }
        let (trep, (bell, psi)) = rayon::join(
            || TripRepTable::build(trep_n, trep_r),
            || {
                (
                    BellTable::build(&psi_derivative_point(bell_n), bell_n),
                    psi_series(psi_order),
                )
            },
        );
        Self { trep, bell, psi }
    }

    /// Adds one to a single representation count, `t_2(7)` when the table
    /// holds it, otherwise `t_r(m)` with `r = min(2, max_r)` and
    /// `m = min(7, max_n)`. Returns the corrupted `(r, m)`, or `None` when
    /// the table is empty.
    pub fn inject_fault(&mut self) -> Option<(usize, usize)> {
        let r = self.trep.max_r().min(2);
        if r == 0 {
            return None;
        }
        let m = self.trep.max_n().min(7);
        let mut rows = std::mem::replace(&mut self.trep, TripRepTable::build(0, 0)).into_rows();
        rows[r - 1][m] += BigUint::one();
        self.trep = TripRepTable::from_rows(rows).expect("shape unchanged");
        Some((r, m))
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    if jobs == 0 {
        return Err(Error::OutOfRange {
            name: "jobs",
            reason: "must be at least 1".into(),
        });
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::OutOfRange {
            name: "jobs",
            reason: e.to_string(),
        })
}

fn witness<L: fmt::Display, R: fmt::Display>(indices: Vec<u64>, lhs: L, rhs: R) -> Failure {
    Failure {
        indices,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn compare<T: PartialEq + fmt::Display>(indices: Vec<u64>, lhs: T, rhs: T) -> Option<Failure> {
    (lhs != rhs).then(|| witness(indices, lhs, rhs))
}

/// Evaluates `eval` on every instance inside `pool`, keeping instance order.
fn fan_out<I, F>(
    pool: &rayon::ThreadPool,
    instances: Vec<I>,
    eval: F,
) -> Result<(u64, Vec<Failure>)>
where
    I: Send + Sync,
    F: Fn(&I) -> Result<Option<Failure>> + Send + Sync,
{
    let total = instances.len() as u64;
    let outcomes: Vec<Option<Failure>> =
        pool.install(|| instances.par_iter().map(&eval).collect::<Result<_>>())?;
    Ok((total, outcomes.into_iter().flatten().collect()))
}

/// Builds the tables `check` needs and runs it.
pub fn run_check(check: Check, bound: usize, jobs: usize) -> Result<VerificationReport> {
    let tables = Tables::for_checks(&[(check, bound)]);
    run_check_with(&tables, check, bound, jobs)
}

/// Runs `check` against prebuilt tables.
pub fn run_check_with(
    tables: &Tables,
    check: Check,
    bound: usize,
    jobs: usize,
) -> Result<VerificationReport> {
    if bound == 0 {
        return Err(Error::OutOfRange {
            name: "bound",
            reason: "must be at least 1".into(),
        });
    }
    let pool = pool(jobs)?;
    let start = Instant::now();
    let (total_cases, failures) = match check {
        Check::Theorem => check_theorem(&pool, tables, bound)?,
        Check::Lemma1 => check_lemma1(&pool, tables, bound)?,
        Check::Lemma2 => check_lemma2(&pool, tables, bound)?,
        Check::Product => check_product(&pool, tables, bound)?,
        Check::Logseries => check_logseries(&pool, tables, bound)?,
        Check::Binomial => check_binomial(&pool, bound)?,
        Check::Oracle => check_oracle(&pool, tables, bound)?,
    };
    Ok(VerificationReport {
        check_name: check.name().to_owned(),
        bound: bound as u64,
        total_cases,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs several checks over one shared set of tables.
pub fn run_checks(
    requests: &[(Check, usize)],
    jobs: usize,
    inject_fault: bool,
) -> Result<Vec<VerificationReport>> {
    let mut tables = Tables::for_checks(requests);
    if inject_fault {
        tables.inject_fault();
    }
    requests
        .iter()
        .map(|&(check, bound)| run_check_with(&tables, check, bound, jobs))
        .collect()
}

fn check_theorem(
    pool: &rayon::ThreadPool,
    tables: &Tables,
    bound: usize,
) -> Result<(u64, Vec<Failure>)> {
    fan_out(pool, (1..=bound).collect(), |&n| {
        let rhs = theorem_rhs(n, &tables.trep)?;
        Ok(compare(vec![n as u64], divisor_sum(n as u64), rhs))
    })
}

fn check_lemma1(
    pool: &rayon::ThreadPool,
    tables: &Tables,
    bound: usize,
) -> Result<(u64, Vec<Failure>)> {
    let log = psi_prefix(tables, bound)?.formal_log()?;
    let instances: Vec<(usize, u64)> = (1..=bound).flat_map(|n| [(n, 1), (n, 2)]).collect();
    fan_out(pool, instances, |&(n, family)| {
        let indices = vec![n as u64, family];
        Ok(if family == 1 {
            compare(
                indices,
                lemma1_lhs_via_bell(&tables.bell, n)?,
                divisor_sum(n as u64),
            )
        } else {
            let scaled = &log.coeffs()[n] * ExactRational::from_integer(factorial(n));
            compare(
                indices,
                faa_di_bruno_log_derivative(&tables.bell, n)?,
                scaled,
            )
        })
    })
}

fn check_lemma2(
    pool: &rayon::ThreadPool,
    tables: &Tables,
    bound: usize,
) -> Result<(u64, Vec<Failure>)> {
    if tables.bell.max_n() < bound {
        return Err(insufficient_bell(tables, bound));
    }
    let instances: Vec<(usize, usize)> = (1..=bound)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .collect();
    fan_out(pool, instances, |&(n, k)| {
        let rhs = lemma2_rhs(n, k, &tables.trep)?;
        let lhs = tables.bell.get(n, k).expect("bounds checked").clone();
        Ok(compare(vec![n as u64, k as u64], lhs, rhs))
    })
}

fn check_product(
    pool: &rayon::ThreadPool,
    tables: &Tables,
    bound: usize,
) -> Result<(u64, Vec<Failure>)> {
    let psi = psi_prefix(tables, bound)?;
    let (form_a, form_b) =
        pool.install(|| rayon::join(|| product_form_a(bound), || product_form_b(bound)));
    let (total, mut failures) = fan_out(pool, (0..=bound).collect(), |&n| {
        Ok(compare(
            vec![n as u64, 1],
            psi.coeffs()[n].clone(),
            form_a.coeffs()[n].clone(),
        ))
    })?;
    let (_, failures_b) = fan_out(pool, (0..=bound).collect(), |&n| {
        Ok(compare(
            vec![n as u64, 2],
            psi.coeffs()[n].clone(),
            form_b.coeffs()[n].clone(),
        ))
    })?;
    failures.extend(failures_b);
    failures.sort_by(|a, b| a.indices.cmp(&b.indices));
    Ok((total, failures))
}

fn check_logseries(
    pool: &rayon::ThreadPool,
    tables: &Tables,
    bound: usize,
) -> Result<(u64, Vec<Failure>)> {
    let log = psi_prefix(tables, bound)?.formal_log()?;
    fan_out(pool, (1..=bound).collect(), |&n| {
        Ok(compare(
            vec![n as u64],
            log.coeffs()[n].clone(),
            -divisor_sum(n as u64),
        ))
    })
}

fn check_binomial(pool: &rayon::ThreadPool, bound: usize) -> Result<(u64, Vec<Failure>)> {
    let bound = bound as u64;
    let mut instances: Vec<(u64, u64, u64)> = (1..=bound)
        .flat_map(|n| (1..=n).map(move |r| (n, r, 1)))
        .collect();
    instances.extend((0..=bound).flat_map(|k| (0..=k).map(move |r| (k, r, 2))));
    fan_out(pool, instances, |&(a, r, family)| {
        Ok(if family == 1 {
            let (lhs, rhs) = binomial_identity_sides(a, r);
            compare(vec![a, r, family], lhs, rhs)
        } else {
            let (lhs, rhs) = pascal_sides(a, r);
            compare(vec![a, r, family], lhs, rhs)
        })
    })
}

/// The Ψ point followed by the seeded random points, each with
/// [`BELL_ORACLE_MAX_N`] coordinates in `[-3, 3]`.
pub fn bell_oracle_points() -> Vec<DerivativePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(BELL_ORACLE_SEED);
    let mut points = vec![psi_derivative_point(BELL_ORACLE_MAX_N)];
    for _ in 0..BELL_ORACLE_RANDOM_POINTS {
        let values: Vec<BigInt> = (0..BELL_ORACLE_MAX_N)
            .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
            .collect();
        points.push(DerivativePoint::new(values));
    }
    points
}

fn check_oracle(
    pool: &rayon::ThreadPool,
    tables: &Tables,
    bound: usize,
) -> Result<(u64, Vec<Failure>)> {
    tables.trep.require(bound, ORACLE_MAX_R)?;
    let trep_cases: Vec<(usize, usize)> = (0..=bound)
        .flat_map(|n| (1..=ORACLE_MAX_R).map(move |r| (n, r)))
        .collect();
    let (trep_total, mut failures) = fan_out(pool, trep_cases, |&(n, r)| {
        let table = tables.trep.get(r, n).expect("bounds checked").clone();
        Ok(compare(
            vec![n as u64, r as u64, 0],
            table,
            trep_oracle(n as u64, r as u32),
        ))
    })?;

    let bell_n = bound.min(BELL_ORACLE_MAX_N);
    let points = bell_oracle_points();
    let bell_tables: Vec<BellTable> = pool.install(|| {
        points
            .par_iter()
            .map(|p| BellTable::build(p, bell_n))
            .collect()
    });
    let bell_cases: Vec<(usize, usize, usize)> = (0..points.len())
        .flat_map(|p| (1..=bell_n).flat_map(move |n| (1..=n).map(move |k| (n, k, p))))
        .collect();
    let (bell_total, bell_failures) = fan_out(pool, bell_cases, |&(n, k, p)| {
        let table = bell_tables[p].get(n, k).expect("built to bell_n").clone();
        let oracle = bell_oracle(&points[p], n, k)?;
        Ok(compare(
            vec![n as u64, k as u64, p as u64 + 1],
            table,
            oracle,
        ))
    })?;
    failures.extend(bell_failures);
    Ok((trep_total + bell_total, failures))
}

fn psi_prefix(tables: &Tables, bound: usize) -> Result<TruncatedSeries> {
    if tables.psi.order() < bound {
        return Err(Error::InsufficientTable {
            needed: format!("psi order {bound}"),
            available: format!("psi order {}", tables.psi.order()),
        });
    }
    Ok(tables.psi.truncate(bound))
}

fn insufficient_bell(tables: &Tables, bound: usize) -> Error {
    Error::InsufficientTable {
        needed: format!("n={bound}"),
        available: format!("n<={}", tables.bell.max_n()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!(
                "unknown format '{other}' (expected table, json or csv)"
            )),
        }
    }
}

pub const CSV_HEADER: &str = "check,bound,indices,lhs,rhs";

pub fn emit_report(report: &VerificationReport, format: Format) -> String {
    emit_reports(std::slice::from_ref(report), format)
}

/// Renders several reports. JSON output is one object per line; CSV output
/// shares a single header row.
pub fn emit_reports(reports: &[VerificationReport], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for report in reports {
                let line = serde_json::to_string(report).expect("report serializes");
                out.push_str(&line);
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for report in reports {
                for f in &report.failures {
                    let indices: Vec<String> = f.indices.iter().map(u64::to_string).collect();
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        report.check_name,
                        report.bound,
                        indices.join(";"),
                        f.lhs,
                        f.rhs
                    );
                }
            }
        }
        Format::Table => {
            let _ = writeln!(
                out,
                "{:<10} {:>6} {:>8} {:>8} {:>10}  STATUS",
                "CHECK", "BOUND", "CASES", "FAILURES", "ELAPSED_MS"
            );
            for report in reports {
                let status = if report.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{:<10} {:>6} {:>8} {:>8} {:>10}  {status}",
                    report.check_name,
                    report.bound,
                    report.total_cases,
                    report.failures.len(),
                    report.elapsed_ms
                );
            }
            for report in reports {
                for f in &report.failures {
                    let _ = writeln!(
                        out,
                        "  {} {:?}: lhs = {}, rhs = {}",
                        report.check_name, f.indices, f.lhs, f.rhs
                    );
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Psi,
    Trep,
    Divsum,
    Bell,
    Rhs,
}

impl FromStr for Entity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "psi" => Ok(Entity::Psi),
            "trep" => Ok(Entity::Trep),
            "divsum" => Ok(Entity::Divsum),
            "bell" => Ok(Entity::Bell),
            "rhs" => Ok(Entity::Rhs),
            other => Err(format!(
                "unknown entity '{other}' (expected psi, trep, divsum, bell or rhs)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComputeArgs {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub order: Option<usize>,
}

fn positive(name: &'static str, value: Option<usize>) -> Result<usize> {
    match value {
        None => Err(Error::MissingArgument(name)),
        Some(0) => Err(Error::OutOfRange {
            name,
            reason: "must be at least 1".into(),
        }),
        Some(v) => Ok(v),
    }
}

/// Evaluates one quantity and renders it exactly.
///
/// `trep` without `r` lists `t_1(n), …, t_n(n)`.
pub fn compute_command(entity: Entity, args: &ComputeArgs) -> Result<String> {
    match entity {
        Entity::Psi => {
            let order = args.order.ok_or(Error::MissingArgument("order"))?;
            Ok(psi_series(order).to_string())
        }
        Entity::Trep => {
            let n = args.n.ok_or(Error::MissingArgument("n"))?;
            match args.r {
                Some(r) => {
                    let r = positive("r", Some(r))?;
                    let table = TripRepTable::build(n, r);
                    Ok(table.get(r, n).expect("table covers (r, n)").to_string())
                }
                None => {
                    let max_r = n.max(1);
                    let table = TripRepTable::build(n, max_r);
                    let values: Vec<String> = (1..=max_r)
                        .map(|r| table.get(r, n).expect("table covers (r, n)").to_string())
                        .collect();
                    Ok(format!("[{}]", values.join(", ")))
                }
            }
        }
        Entity::Divsum => {
            let n = positive("n", args.n)?;
            Ok(divisor_sum(n as u64).to_string())
        }
        Entity::Bell => {
            let n = positive("n", args.n)?;
            let k = positive("k", args.k)?;
            if k > n {
                return Err(Error::OutOfRange {
                    name: "k",
                    reason: format!("must not exceed n={n}"),
                });
            }
            let table = BellTable::build(&psi_derivative_point(n), n);
            Ok(table.get(n, k).expect("k <= n").to_string())
        }
        Entity::Rhs => {
            let n = positive("n", args.n)?;
            let table = TripRepTable::build(n, n);
            Ok(theorem_rhs(n, &table)?.to_string())
        }
    }
}
