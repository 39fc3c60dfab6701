//! Dedekind eta quotients as modular forms of half-integral weight.
//!
//! The crate computes q-expansions of `∏ η(mz)^{r_m}` exactly, derives their
//! weight, level and quadratic character, applies the Hecke operators
//! `T_{p²}` and certifies which quotients are Hecke eigenforms. A reference
//! table of known eigenform quotients and an exhaustive search over bounded
//! quotients are included.

pub mod arith;
pub mod error;
pub mod eta;
pub mod hecke;
pub mod qseries;
pub mod search;
pub mod table;

pub use error::{Error, Result};
pub use eta::{parse, EtaQuotient, EtaTerm, ModularInvariants};
pub use hecke::{
    apply_tp2, eigen_check, purkait_bound, sturm_bound, EigenReport, HeckeContext, HeckeImage,
    PrimeCheck, Verdict, DEFAULT_PRIME_CAP,
};
pub use qseries::QSeries;
pub use search::{
    classify, classify_each, enumerate, Classification, ClassificationRecord, SearchConfig, Summary,
};
pub use table::{ReferenceRow, ReferenceTable, RowAnomaly};
