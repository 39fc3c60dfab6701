//! Serialized shapes of everything the CLI prints. Field order is the key
//! order on the wire.

use std::str::FromStr;

use etaq_core::{
    purkait_bound, sturm_bound, ClassificationRecord, EigenReport, EtaQuotient, ModularInvariants,
    PrimeCheck, Verdict,
};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{Number, Value};

/// An exact rational as `"num/den"`, or as a bare integer string when the
/// denominator is 1.
pub fn rational_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integers become JSON numbers of any size; other rationals become
/// `"num/den"` strings.
pub fn rational_value(r: &BigRational) -> Value {
    if r.denom().is_one() {
        Value::Number(Number::from_str(&r.numer().to_string()).expect("integer literal"))
    } else {
        Value::String(rational_text(r))
    }
}

/// `[p, λ_p]` for every prime whose relation held, ascending.
fn eigenvalue_pairs(report: &EigenReport) -> Vec<(u64, Value)> {
    report
        .primes
        .iter()
        .filter(|c| c.holds)
        .map(|c| (c.prime, rational_value(&c.eigenvalue)))
        .collect()
}

fn eigenvalue_list(report: &EigenReport) -> String {
    report
        .primes
        .iter()
        .filter(|c| c.holds)
        .map(|c| format!("{}:{}", c.prime, rational_text(&c.eigenvalue)))
        .collect::<Vec<_>>()
        .join(";")
}

/// The Purkait bound when it applies (odd `k >= 3`).
pub fn purkait_text(inv: &ModularInvariants) -> Option<String> {
    if inv.is_half_integral() && inv.weight_num >= 3 {
        purkait_bound(inv.level, inv.weight_num)
            .ok()
            .map(|r| rational_text(&r))
    } else {
        None
    }
}

#[derive(Debug, Serialize)]
pub struct InvariantsRecord {
    pub eta: String,
    pub weight: String,
    pub level: u64,
    pub character: i64,
    pub valuation: u64,
    pub sturm: u64,
    #[serde(rename = "R")]
    pub r: Option<String>,
}

impl InvariantsRecord {
    pub fn new(q: &EtaQuotient, inv: &ModularInvariants) -> Self {
        InvariantsRecord {
            eta: q.to_compact(),
            weight: inv.weight_label(),
            level: inv.level,
            character: inv.character,
            valuation: inv.valuation,
            sturm: sturm_bound(inv.level, inv.weight_num),
            r: purkait_text(inv),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ExpansionRecord {
    pub eta: String,
    pub valuation: u64,
    pub prec: usize,
    pub coefficients: Vec<Value>,
}

/// One line of search output.
#[derive(Debug, Serialize)]
pub struct SearchRecord {
    pub eta: String,
    pub weight: String,
    pub level: u64,
    pub character: i64,
    pub valuation: u64,
    pub sturm: u64,
    #[serde(rename = "R")]
    pub r: Option<String>,
    pub prime_cap: Option<u64>,
    pub eigenvalues: Vec<(u64, Value)>,
    pub verdict: &'static str,
    pub table_row: Option<u32>,
}

impl SearchRecord {
    pub fn new(record: &ClassificationRecord) -> Self {
        let report = &record.report;
        SearchRecord {
            eta: record.quotient.to_compact(),
            weight: record.invariants.weight_label(),
            level: record.invariants.level,
            character: record.invariants.character,
            valuation: record.invariants.valuation,
            sturm: report.sturm,
            r: report.purkait_r.as_ref().map(rational_text),
            prime_cap: report.prime_cap,
            eigenvalues: eigenvalue_pairs(report),
            verdict: report.verdict.label(),
            table_row: record.table_row,
        }
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "eta",
    "weight",
    "level",
    "character",
    "valuation",
    "sturm",
    "R",
    "verdict",
    "eigenvalues",
];

/// The CSV row matching [`CSV_HEADER`]; eigenvalues as `p:λ` joined by `;`.
pub fn csv_row(record: &ClassificationRecord) -> [String; 9] {
    let report = &record.report;
    [
        record.quotient.to_compact(),
        record.invariants.weight_label(),
        record.invariants.level.to_string(),
        record.invariants.character.to_string(),
        record.invariants.valuation.to_string(),
        report.sturm.to_string(),
        report
            .purkait_r
            .as_ref()
            .map(rational_text)
            .unwrap_or_default(),
        report.verdict.label().to_string(),
        eigenvalue_list(report),
    ]
}

#[derive(Debug, Serialize)]
pub struct PrimeRecord {
    pub prime: u64,
    /// `null` when the relation failed.
    pub eigenvalue: Option<Value>,
    pub holds: bool,
    pub failure_index: Option<u64>,
    pub koblitz: bool,
}

impl From<&PrimeCheck> for PrimeRecord {
    fn from(c: &PrimeCheck) -> Self {
        PrimeRecord {
            prime: c.prime,
            eigenvalue: c.holds.then(|| rational_value(&c.eigenvalue)),
            holds: c.holds,
            failure_index: c.failure_index,
            koblitz: c.koblitz,
        }
    }
}

/// Full output of `check`.
#[derive(Debug, Serialize)]
pub struct ReportRecord {
    pub eta: String,
    pub weight: String,
    pub level: u64,
    pub character: i64,
    pub valuation: u64,
    pub sturm: u64,
    #[serde(rename = "R")]
    pub r: Option<String>,
    pub prime_cap: Option<u64>,
    pub prime_bound: u64,
    pub primes: Vec<PrimeRecord>,
    pub eigenvalues: Vec<(u64, Value)>,
    pub verdict: &'static str,
    pub vacuous: bool,
    /// `[p, n]`: the relation for `T_{p²}` fails at `q^n`.
    pub witness: Option<(u64, u64)>,
}

impl ReportRecord {
    pub fn new(report: &EigenReport) -> Self {
        let inv = &report.invariants;
        ReportRecord {
            eta: report.quotient.to_compact(),
            weight: inv.weight_label(),
            level: inv.level,
            character: inv.character,
            valuation: inv.valuation,
            sturm: report.sturm,
            r: report.purkait_r.as_ref().map(rational_text),
            prime_cap: report.prime_cap,
            prime_bound: report.prime_bound,
            primes: report.primes.iter().map(PrimeRecord::from).collect(),
            eigenvalues: eigenvalue_pairs(report),
            verdict: report.verdict.label(),
            vacuous: report.is_vacuous(),
            witness: match report.verdict {
                Verdict::NotEigenform { prime, index } => Some((prime, index)),
                _ => None,
            },
        }
    }
}
