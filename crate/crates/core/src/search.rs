//! Exhaustive enumeration of eta quotients of a fixed weight under a bound
//! on `∑ m·r_m`, and their classification as Hecke eigenforms.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eta::{EtaQuotient, ModularInvariants};
use crate::hecke::{eigen_check, EigenReport, Verdict, DEFAULT_PRIME_CAP};
use crate::table::ReferenceTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Odd; the weight is `weight_num / 2`.
    pub weight_num: u32,
    /// Bound on `∑ m·r_m`, a positive multiple of 24.
    pub max_weighted_sum: u64,
    pub max_level: Option<u64>,
    pub prime_cap: u64,
    pub parallelism: usize,
}

impl SearchConfig {
    pub fn new(weight_num: u32, max_weighted_sum: u64) -> Self {
        SearchConfig {
            weight_num,
            max_weighted_sum,
            max_level: None,
            prime_cap: DEFAULT_PRIME_CAP,
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.weight_num % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "weight {}/2 is not half-integral",
                self.weight_num
            )));
        }
        if self.max_weighted_sum == 0 || self.max_weighted_sum % 24 != 0 {
            return Err(Error::InvalidConfig(format!(
                "max weighted sum {} is not a positive multiple of 24",
                self.max_weighted_sum
            )));
        }
        if self.prime_cap == 0 || self.parallelism == 0 {
            return Err(Error::InvalidConfig(
                "prime cap and parallelism must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Every way to write `total` as `∑ m·r_m` with `∑ r_m = weight`, distinct
/// scales `m >= min_scale` increasing and all `r_m >= 1`.
fn descend(
    min_scale: u64,
    weight: u32,
    total: u64,
    prefix: &mut Vec<(u64, u32)>,
    out: &mut Vec<Vec<(u64, u32)>>,
) {
    if weight == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    // The remaining `weight` units each contribute at least `min_scale`.
    let mut m = min_scale;
    while m * weight as u64 <= total {
        for r in 1..=weight {
            let used = m * r as u64;
            if used > total {
                break;
            }
            let rest = weight - r;
            // Later scales exceed m, so they need more than m per unit.
            if rest > 0 && total - used < (m + 1) * rest as u64 {
                continue;
            }
            prefix.push((m, r));
            descend(m + 1, rest, total - used, prefix, out);
            prefix.pop();
        }
        m += 1;
    }
}

/// Quotients with `∑ r_m = k` and `∑ m·r_m ≤ S`, `≡ 0 (mod 24)`, in
/// canonical order: by `∑ m·r_m`, then lexicographically on the terms.
pub fn enumerate(config: &SearchConfig) -> Result<impl Iterator<Item = EtaQuotient>> {
    config.validate()?;
    let weight = config.weight_num;
    let max_level = config.max_level;
    let totals = (24..=config.max_weighted_sum).step_by(24);
    Ok(totals
        .flat_map(move |total| {
            let mut found = Vec::new();
            descend(1, weight, total, &mut Vec::new(), &mut found);
            found.sort();
            found
        })
        .map(|terms| EtaQuotient::new(terms).expect("enumerated terms are valid"))
        .filter(move |q| match max_level {
            Some(limit) => q.invariants().is_ok_and(|inv| inv.level <= limit),
            None => true,
        }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub quotient: EtaQuotient,
    pub invariants: ModularInvariants,
    pub report: EigenReport,
    pub table_row: Option<u32>,
}

impl ClassificationRecord {
    pub fn in_reference_table(&self) -> bool {
        self.table_row.is_some()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub candidates: usize,
    pub certified: usize,
    pub up_to_cap: usize,
    pub not_eigenform: usize,
    pub not_applicable: usize,
    /// Eigenform verdicts on quotients missing from the reference table.
    pub extras: Vec<EtaQuotient>,
}

impl Summary {
    fn record(&mut self, r: &ClassificationRecord) {
        self.candidates += 1;
        match r.report.verdict {
            Verdict::EigenformCertified { .. } => self.certified += 1,
            Verdict::EigenformUpToCap => self.up_to_cap += 1,
            Verdict::NotEigenform { .. } => self.not_eigenform += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
        }
        if r.report.verdict.is_eigenform() && r.table_row.is_none() {
            self.extras.push(r.quotient.clone());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub records: Vec<ClassificationRecord>,
    pub summary: Summary,
}

fn classify_one(q: EtaQuotient, prime_cap: u64) -> Result<ClassificationRecord> {
    let report = eigen_check(&q, Some(prime_cap))?;
    Ok(ClassificationRecord {
        invariants: report.invariants,
        table_row: ReferenceTable::get().find(&q),
        quotient: q,
        report,
    })
}

/// Classifies every enumerated quotient, handing records to `sink` in
/// canonical order as soon as each batch is done.
pub fn classify_each(
    config: &SearchConfig,
    mut sink: impl FnMut(&ClassificationRecord),
) -> Result<Summary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::Invariant(format!("cannot build worker pool: {e}")))?;
    let batch_size = 4 * config.parallelism;
    let mut candidates = enumerate(config)?.peekable();
    let mut summary = Summary::default();
    while candidates.peek().is_some() {
        let batch: Vec<EtaQuotient> = candidates.by_ref().take(batch_size).collect();
        let records: Vec<ClassificationRecord> = pool.install(|| {
            batch
                .into_par_iter()
                .map(|q| classify_one(q, config.prime_cap))
                .collect::<Result<_>>()
        })?;
        for r in &records {
            summary.record(r);
            sink(r);
        }
    }
    Ok(summary)
}

/// Classifies every enumerated quotient.
pub fn classify(config: &SearchConfig) -> Result<Classification> {
    let mut records = Vec::new();
    let summary = classify_each(config, |r| records.push(r.clone()))?;
    Ok(Classification { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::parse;

    fn texts(config: &SearchConfig) -> Vec<String> {
        enumerate(config).unwrap().map(|q| q.to_compact()).collect()
    }

    #[test]
    fn weight_one_half() {
        assert_eq!(texts(&SearchConfig::new(1, 48)), vec!["24:1", "48:1"]);
    }

    #[test]
    fn weight_three_halves_contains_known_rows() {
        let all = texts(&SearchConfig::new(3, 24));
        for want in ["8:3", "4:2,16:1", "2:1,11:2"] {
            assert!(all.iter().any(|t| t == want), "{want} missing");
        }
        let mut cfg = SearchConfig::new(3, 24);
        cfg.max_level = Some(64);
        let capped = texts(&cfg);
        assert!(capped.iter().any(|t| t == "8:3"));
        assert!(!capped.iter().any(|t| t == "4:2,16:1"));
        for q in enumerate(&cfg).unwrap() {
            assert!(q.invariants().unwrap().level <= 64);
        }
    }

    #[test]
    fn canonical_order() {
        let qs: Vec<EtaQuotient> = enumerate(&SearchConfig::new(3, 48)).unwrap().collect();
        for w in qs.windows(2) {
            let key = |q: &EtaQuotient| (q.weighted_sum(), q.terms().to_vec());
            assert!(key(&w[0]) < key(&w[1]));
        }
    }

    fn brute(k: u32, s: u64) -> Vec<EtaQuotient> {
        // nested loops over exponent vectors (r_1, …, r_S) with ∑ r = k
        let mut out = Vec::new();
        fn rec(m: u64, s: u64, k: u32, acc: &mut Vec<(u64, u32)>, out: &mut Vec<EtaQuotient>) {
            let used_k: u32 = acc.iter().map(|t| t.1).sum();
            let used_s: u64 = acc.iter().map(|t| t.0 * t.1 as u64).sum();
            if used_s > s {
                return;
            }
            if m > s {
                if used_k == k && used_s > 0 && used_s <= s && used_s % 24 == 0 {
                    out.push(EtaQuotient::new(acc.clone()).unwrap());
                }
                return;
            }
            rec(m + 1, s, k, acc, out);
            for r in 1..=(k - used_k) {
                acc.push((m, r));
                rec(m + 1, s, k, acc, out);
                acc.pop();
            }
        }
        rec(1, s, k, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for k in [1u32, 3, 5] {
            for s in [24u64, 48] {
                let mut fast: Vec<EtaQuotient> =
                    enumerate(&SearchConfig::new(k, s)).unwrap().collect();
                fast.sort();
                assert_eq!(fast, brute(k, s), "k={k} S={s}");
            }
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(enumerate(&SearchConfig::new(2, 24)).is_err());
        assert!(enumerate(&SearchConfig::new(3, 30)).is_err());
        assert!(enumerate(&SearchConfig::new(3, 0)).is_err());
    }

    #[test]
    fn classify_weight_eleven_halves() {
        let mut cfg = SearchConfig::new(11, 24);
        cfg.prime_cap = 7;
        let result = classify(&cfg).unwrap();
        let eigen: Vec<String> = result
            .records
            .iter()
            .filter(|r| r.report.verdict.is_eigenform())
            .map(|r| r.quotient.to_compact())
            .collect();
        assert!(eigen.contains(&"1:2,2:7,4:2".to_string()));
        assert!(eigen.contains(&"2:10,4:1".to_string()));
        let row43 = result
            .records
            .iter()
            .find(|r| r.quotient == parse("1:2,2:7,4:2").unwrap())
            .unwrap();
        assert_eq!(row43.table_row, Some(43));
        assert_eq!(result.summary.candidates, result.records.len());
    }
}
