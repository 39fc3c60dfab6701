//! Re-derives every row of the embedded reference table: invariants against
//! the printed columns, then the eigenform check.

use std::collections::BTreeMap;

use etaq_core::{
    eigen_check, purkait_bound, EigenReport, EtaQuotient, ReferenceRow, ReferenceTable, Result,
    RowAnomaly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::record::{rational_text, rational_value};

/// Rows whose Purkait bound is at most this are certified in full by default.
pub const FULL_CHECK_LIMIT: u64 = 200;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Check the printed quotients instead of the corrected ones.
    pub strict_printed: bool,
    /// Every row with a Purkait bound is checked up to it, however large.
    pub full: bool,
    pub prime_cap: u64,
    pub rows: Option<Vec<u32>>,
}

impl VerifyOptions {
    pub fn new(prime_cap: u64) -> Self {
        VerifyOptions {
            strict_printed: false,
            full: false,
            prime_cap,
            rows: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Flag,
}

#[derive(Clone, Debug)]
pub struct RowOutcome {
    pub row: &'static ReferenceRow,
    pub quotient: EtaQuotient,
    /// Anomaly recomputed from the printed data.
    pub anomaly: Option<RowAnomaly>,
    pub report: Option<EigenReport>,
    pub status: Status,
    pub reason: Option<String>,
}

impl RowOutcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug)]
pub struct TableVerification {
    pub outcomes: Vec<RowOutcome>,
    /// Detected anomalies equal the annotated ones, restricted to the rows
    /// that were examined.
    pub anomalies_as_annotated: bool,
}

impl TableVerification {
    pub fn canonical(&self) -> impl Iterator<Item = &RowOutcome> {
        self.outcomes.iter().filter(|o| o.row.is_canonical())
    }

    pub fn canonical_passed(&self) -> usize {
        self.canonical().filter(|o| o.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.anomalies_as_annotated && self.canonical().all(|o| o.passed())
    }
}

fn cap_for(
    quotient: &EtaQuotient,
    weight_num: u32,
    level: u64,
    opts: &VerifyOptions,
) -> Option<u64> {
    if weight_num < 3 || !quotient.is_modular() {
        return Some(opts.prime_cap);
    }
    match purkait_bound(level, weight_num) {
        Ok(r) if opts.full || r <= BigRational::from_integer(BigInt::from(FULL_CHECK_LIMIT)) => {
            None
        }
        _ => Some(opts.prime_cap),
    }
}

fn verify_row(
    row: &'static ReferenceRow,
    anomaly: Option<RowAnomaly>,
    opts: &VerifyOptions,
) -> Result<RowOutcome> {
    let quotient = if opts.strict_printed {
        row.printed_quotient()
    } else {
        row.quotient()
    };
    let mut outcome = RowOutcome {
        row,
        quotient: quotient.clone(),
        anomaly,
        report: None,
        status: Status::Flag,
        reason: None,
    };
    if let Some(RowAnomaly::Duplicate { of }) = anomaly {
        outcome.reason = Some(format!("duplicate of row {of}"));
        return Ok(outcome);
    }
    let inv = match quotient.invariants() {
        Ok(inv) => inv,
        Err(e) => {
            outcome.reason = Some(e.to_string());
            return Ok(outcome);
        }
    };
    if (inv.weight_num, inv.level, inv.character) != (row.weight_num, row.level, row.character) {
        outcome.reason = Some(format!(
            "computed weight {}, level {}, character {}",
            inv.weight_label(),
            inv.level,
            inv.character
        ));
        return Ok(outcome);
    }
    let report = eigen_check(
        &quotient,
        cap_for(&quotient, inv.weight_num, inv.level, opts),
    )?;
    if report.verdict.is_eigenform() {
        outcome.status = Status::Pass;
    } else {
        outcome.reason = Some(match report.verdict {
            etaq_core::Verdict::NotEigenform { prime, index } => {
                format!("T_{{{prime}^2}} relation fails at q^{index}")
            }
            _ => "no prime could be checked".into(),
        });
    }
    outcome.report = Some(report);
    Ok(outcome)
}

/// Runs the harness on the rows selected by `opts`, in parallel on the
/// current rayon pool, returning outcomes in row order.
pub fn verify_table(opts: &VerifyOptions) -> Result<TableVerification> {
    let table = ReferenceTable::get();
    let detected: BTreeMap<u32, RowAnomaly> = table.detect_anomalies().into_iter().collect();
    let annotated: BTreeMap<u32, RowAnomaly> = table.annotated_anomalies().into_iter().collect();
    let selected: Vec<&'static ReferenceRow> = table
        .rows()
        .iter()
        .filter(|r| opts.rows.as_ref().is_none_or(|rows| rows.contains(&r.row)))
        .collect();
    let anomalies_as_annotated = selected
        .iter()
        .all(|r| detected.get(&r.row) == annotated.get(&r.row));
    // Heaviest rows first keeps the pool busy; order is restored below.
    let mut order: Vec<usize> = (0..selected.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(selected[i].weight_num as u64 * selected[i].level));
    let mut outcomes: Vec<(usize, RowOutcome)> = order
        .into_par_iter()
        .map(|i| {
            let r = selected[i];
            verify_row(r, detected.get(&r.row).copied(), opts).map(|o| (i, o))
        })
        .collect::<Result<_>>()?;
    outcomes.sort_by_key(|&(i, _)| i);
    Ok(TableVerification {
        outcomes: outcomes.into_iter().map(|(_, o)| o).collect(),
        anomalies_as_annotated,
    })
}

/// One JSON line per row.
#[derive(Debug, Serialize)]
pub struct RowRecord {
    pub row: u32,
    pub status: Status,
    pub eta: String,
    pub printed: &'static str,
    pub weight: String,
    pub level: u64,
    pub character: i64,
    #[serde(rename = "R")]
    pub r: Option<String>,
    pub prime_cap: Option<u64>,
    pub eigenvalues: Vec<(u64, Value)>,
    pub verdict: Option<&'static str>,
    pub anomaly: Option<String>,
    pub reason: Option<String>,
}

impl RowRecord {
    pub fn new(o: &RowOutcome) -> Self {
        let report = o.report.as_ref();
        RowRecord {
            row: o.row.row,
            status: o.status,
            eta: o.quotient.to_compact(),
            printed: o.row.printed,
            weight: o.row.weight_label(),
            level: o.row.level,
            character: o.row.character,
            r: report.and_then(|r| r.purkait_r.as_ref()).map(rational_text),
            prime_cap: report.and_then(|r| r.prime_cap),
            eigenvalues: report
                .map(|r| {
                    r.primes
                        .iter()
                        .filter(|c| c.holds)
                        .map(|c| (c.prime, rational_value(&c.eigenvalue)))
                        .collect()
                })
                .unwrap_or_default(),
            verdict: report.map(|r| r.verdict.label()),
            anomaly: o.anomaly.map(|a| a.describe()),
            reason: o.reason.clone(),
        }
    }
}

/// One human-readable line per row.
pub fn describe(o: &RowOutcome) -> String {
    let status = match o.status {
        Status::Pass => "PASS",
        Status::Flag => "FLAG",
    };
    let mut line = format!(
        "{status} row {:>2}  {:<28} k={:<5} N={:<5} D={:<4}",
        o.row.row,
        o.quotient.to_string(),
        o.row.weight_label(),
        o.row.level,
        o.row.character
    );
    if let Some(report) = &o.report {
        line.push_str(&format!(" {}", report.verdict.label()));
        if report.is_vacuous() {
            line.push_str(" (vacuous certification)");
        }
        if report.prime_bound > 0 {
            line.push_str(&format!(" p<={}", report.prime_bound));
        }
    }
    if let Some(reason) = &o.reason {
        line.push_str(&format!("  [{reason}]"));
    }
    if let Some(a) = o.anomaly {
        if !matches!(a, RowAnomaly::Duplicate { .. }) {
            line.push_str(&format!("  [printed {}: {}]", o.row.printed, a.describe()));
        }
    }
    line
}
