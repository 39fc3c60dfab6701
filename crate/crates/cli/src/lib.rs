//! Library side of the `etaq` command: argument-independent command bodies
//! that write to any [`Write`] and report an [`ExitStatus`].

pub mod record;
pub mod verify;

use std::io::{self, Write};

use etaq_core::{classify_each, eigen_check, parse, Error, EtaQuotient, SearchConfig, Verdict};
use serde::Serialize;

use record::{ExpansionRecord, InvariantsRecord, ReportRecord, SearchRecord, CSV_HEADER};
use verify::{TableVerification, VerifyOptions};

/// Name of the environment variable that overrides the default prime cap.
pub const PRIME_CAP_ENV: &str = "ETA_EIGEN_PRIME_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    ParseError = 2,
    NotModular = 3,
    VerificationFailed = 4,
    Internal = 5,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Core(e) => match e {
                Error::NotModular { .. } => ExitStatus::NotModular,
                Error::Syntax { .. }
                | Error::EmptyQuotient
                | Error::ZeroScale
                | Error::NonPositiveExponent { .. }
                | Error::PrecisionTooSmall { .. }
                | Error::IntegralWeight { .. }
                | Error::InvalidConfig(_) => ExitStatus::ParseError,
                _ => ExitStatus::Internal,
            },
            CliError::Usage(_) => ExitStatus::ParseError,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => ExitStatus::Internal,
        }
    }
}

pub type CliResult<T = ExitStatus> = std::result::Result<T, CliError>;

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Usage(format!("{command} does not support --format {format:?}").to_lowercase())
}

/// One JSON document per line.
fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Parses a quotient and insists that it is modular.
pub fn parse_modular(text: &str) -> CliResult<EtaQuotient> {
    let q = parse(text)?;
    q.invariants()?;
    Ok(q)
}

/// Parses a weight written `k/2` with `k` odd, returning `k`.
pub fn parse_weight(text: &str) -> Result<u32, String> {
    let (num, den) = text
        .split_once('/')
        .ok_or_else(|| format!("weight {text:?} is not of the form k/2"))?;
    let num: u32 = num
        .trim()
        .parse()
        .map_err(|_| format!("bad weight numerator in {text:?}"))?;
    if den.trim() != "2" || num % 2 == 0 {
        return Err(format!("weight {text:?} is not half-integral"));
    }
    Ok(num)
}

pub fn cmd_expand(text: &str, prec: usize, format: Format, out: &mut dyn Write) -> CliResult {
    let q = parse_modular(text)?;
    let series = q.q_expansion(prec)?;
    let valuation = q.weighted_sum() / 24;
    match format {
        Format::Json => {
            let coefficients = series
                .coeffs()
                .iter()
                .map(|c| serde_json::Value::Number(c.to_string().parse().expect("integer literal")))
                .collect();
            let rec = ExpansionRecord {
                eta: q.to_compact(),
                valuation,
                prec,
                coefficients,
            };
            write_json(out, &rec)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "a_n"])?;
            for (n, c) in series.coeffs().iter().enumerate() {
                w.write_record([n.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{q}")?;
            writeln!(out, "valuation {valuation}")?;
            for (n, c) in series.coeffs().iter().enumerate() {
                writeln!(out, "{n} {c}")?;
            }
        }
    }
    Ok(ExitStatus::Success)
}

pub fn cmd_invariants(text: &str, format: Format, out: &mut dyn Write) -> CliResult {
    let q = parse(text)?;
    let inv = q.invariants()?;
    let rec = InvariantsRecord::new(&q, &inv);
    match format {
        Format::Json => write_json(out, &rec)?,
        Format::Text => {
            writeln!(out, "{q}")?;
            writeln!(out, "weight     {}", rec.weight)?;
            writeln!(out, "level      {}", rec.level)?;
            writeln!(out, "character  {}", rec.character)?;
            writeln!(out, "valuation  {}", rec.valuation)?;
            writeln!(out, "sturm      {}", rec.sturm)?;
            writeln!(out, "R          {}", rec.r.as_deref().unwrap_or("-"))?;
        }
        Format::Csv => return Err(unsupported("invariants", format)),
    }
    Ok(ExitStatus::Success)
}

/// Exits with [`ExitStatus::VerificationFailed`] on a `not_eigenform`
/// verdict.
pub fn cmd_check(text: &str, prime_cap: u64, format: Format, out: &mut dyn Write) -> CliResult {
    let q = parse_modular(text)?;
    let report = eigen_check(&q, Some(prime_cap))?;
    match format {
        Format::Json => write_json(out, &ReportRecord::new(&report))?,
        Format::Text => {
            let rec = ReportRecord::new(&report);
            writeln!(
                out,
                "{q}  weight {} level {} character {}",
                rec.weight, rec.level, rec.character
            )?;
            writeln!(
                out,
                "sturm {}  R {}  primes <= {}",
                rec.sturm,
                rec.r.as_deref().unwrap_or("-"),
                rec.prime_bound
            )?;
            for c in &rec.primes {
                let value = match &c.eigenvalue {
                    Some(v) => v.to_string().trim_matches('"').to_string(),
                    None => format!("fails at q^{}", c.failure_index.unwrap_or(0)),
                };
                let note = if c.koblitz {
                    ""
                } else {
                    "  (p | N: extension beyond Koblitz's hypothesis)"
                };
                writeln!(out, "  p = {:<4} {value}{note}", c.prime)?;
            }
            write!(out, "{}", rec.verdict)?;
            if rec.vacuous {
                write!(
                    out,
                    " (vacuous certification: no prime p <= R with p not dividing N)"
                )?;
            }
            writeln!(out)?;
        }
        Format::Csv => return Err(unsupported("check", format)),
    }
    Ok(match report.verdict {
        Verdict::NotEigenform { .. } => ExitStatus::VerificationFailed,
        _ => ExitStatus::Success,
    })
}

/// Streams one record per candidate, in canonical order.
pub fn cmd_search(config: &SearchConfig, format: Format, out: &mut dyn Write) -> CliResult {
    let mut failure: Option<CliError> = None;
    let summary = match format {
        Format::Json => classify_each(config, |r| {
            if failure.is_none() {
                if let Err(e) = write_json(out, &SearchRecord::new(r)) {
                    failure = Some(e);
                }
            }
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(CSV_HEADER)?;
            let summary = classify_each(config, |r| {
                if failure.is_none() {
                    if let Err(e) = w
                        .write_record(record::csv_row(r))
                        .and_then(|()| Ok(w.flush()?))
                    {
                        failure = Some(e.into());
                    }
                }
            })?;
            w.flush()?;
            summary
        }
        Format::Text => return Err(unsupported("search", format)),
    };
    if let Some(e) = failure {
        return Err(e);
    }
    out.flush()?;
    let extras: Vec<String> = summary.extras.iter().map(|q| q.to_compact()).collect();
    eprintln!(
        "{} candidates: {} certified, {} eigenform up to cap, {} not eigenform, {} not applicable",
        summary.candidates,
        summary.certified,
        summary.up_to_cap,
        summary.not_eigenform,
        summary.not_applicable
    );
    if !extras.is_empty() {
        eprintln!(
            "eigenform verdicts outside the reference table: {}",
            extras.join(" ")
        );
    }
    Ok(ExitStatus::Success)
}

pub fn write_verification(
    result: &TableVerification,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    match format {
        Format::Json => {
            for o in &result.outcomes {
                write_json(out, &verify::RowRecord::new(o))?;
            }
        }
        Format::Text => {
            for o in &result.outcomes {
                writeln!(out, "{}", verify::describe(o))?;
            }
            let total = result.canonical().count();
            writeln!(
                out,
                "canonical rows passing: {}/{}; anomalies {}",
                result.canonical_passed(),
                total,
                if result.anomalies_as_annotated {
                    "flagged as annotated"
                } else {
                    "differ from the annotations"
                }
            )?;
        }
        Format::Csv => return Err(unsupported("verify-table", format)),
    }
    Ok(())
}

/// Exit 0 iff every examined canonical row passes and every anomaly is
/// flagged as annotated.
pub fn cmd_verify_table(opts: &VerifyOptions, format: Format, out: &mut dyn Write) -> CliResult {
    let result = verify::verify_table(opts)?;
    write_verification(&result, format, out)?;
    Ok(if result.all_passed() {
        ExitStatus::Success
    } else {
        ExitStatus::VerificationFailed
    })
}
