//! Eta quotients `F(z) = ∏ η(mz)^{r_m}` with positive exponents: parsing,
//! modularity, level and character, and q-expansions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::arith::{factorize, fundamental_from_exponents};
use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// One factor `η(scale·z)^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaTerm {
    pub scale: u64,
    pub exponent: u32,
}

/// A product of eta factors with positive exponents, scales strictly
/// increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaQuotient {
    terms: Vec<EtaTerm>,
}

/// Weight, level, character and order at infinity of a modular eta quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModularInvariants {
    /// The form has weight `weight_num / 2`.
    pub weight_num: u32,
    pub level: u64,
    /// Normalized discriminant of the quadratic character; 1 is trivial.
    pub character: i64,
    /// Order of vanishing at infinity, `∑ m·r_m / 24`.
    pub valuation: u64,
    /// Least common multiple of the scales.
    pub lcm_scales: u64,
}

impl ModularInvariants {
    pub fn is_half_integral(&self) -> bool {
        self.weight_num % 2 == 1
    }

    /// Weight as `"k/2"`, or as an integer when `k` is even.
    pub fn weight_label(&self) -> String {
        if self.is_half_integral() {
            format!("{}/2", self.weight_num)
        } else {
            (self.weight_num / 2).to_string()
        }
    }
}

impl EtaQuotient {
    /// Builds the canonical quotient: scales sorted, repeated scales merged by
    /// adding exponents.
    pub fn new(terms: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut merged: BTreeMap<u64, u32> = BTreeMap::new();
        for (scale, exponent) in terms {
            if scale == 0 {
                return Err(Error::ZeroScale);
            }
            if exponent == 0 {
                return Err(Error::NonPositiveExponent { scale, exponent: 0 });
            }
            *merged.entry(scale).or_default() += exponent;
        }
        if merged.is_empty() {
            return Err(Error::EmptyQuotient);
        }
        Ok(EtaQuotient {
            terms: merged
                .into_iter()
                .map(|(scale, exponent)| EtaTerm { scale, exponent })
                .collect(),
        })
    }

    pub fn terms(&self) -> &[EtaTerm] {
        &self.terms
    }

    /// `∑ r_m`; the weight is half of this.
    pub fn weight_num(&self) -> u32 {
        self.terms.iter().map(|t| t.exponent).sum()
    }

    /// `∑ m·r_m`.
    pub fn weighted_sum(&self) -> u64 {
        self.terms.iter().map(|t| t.scale * t.exponent as u64).sum()
    }

    pub fn lcm_scales(&self) -> u64 {
        self.terms.iter().fold(1, |acc, t| acc.lcm(&t.scale))
    }

    /// Whether the quotient is a modular form, i.e. `∑ m·r_m ≡ 0 (mod 24)`.
    /// Such quotients are automatically cusp forms.
    pub fn is_modular(&self) -> bool {
        self.weighted_sum() % 24 == 0
    }

    fn require_modular(&self) -> Result<()> {
        if self.is_modular() {
            Ok(())
        } else {
            Err(Error::NotModular {
                weighted_sum: self.weighted_sum(),
            })
        }
    }

    /// Weight, level, character and valuation.
    ///
    /// The level is `lcm(M, denominator of ∑ r_m/(24m))` with `M` the lcm of
    /// the scales. The character is `χ_D` with `D = 8∏ m^{r_m}` in
    /// half-integral weight and `D = (−1)^w ∏ m^{r_m}` in integral weight `w`,
    /// stored as its fundamental discriminant.
    pub fn invariants(&self) -> Result<ModularInvariants> {
        self.require_modular()?;
        let weight_num = self.weight_num();
        let lcm_scales = self.lcm_scales();

        let numerator: u128 = self
            .terms
            .iter()
            .map(|t| t.exponent as u128 * (lcm_scales / t.scale) as u128)
            .sum();
        let denominator = 24 * lcm_scales as u128;
        let reduced_den = denominator / numerator.gcd(&denominator);
        let level = u64::try_from((lcm_scales as u128).lcm(&reduced_den))
            .map_err(|_| Error::Invariant("level overflows u64".into()))?;

        let mut exponents: BTreeMap<u64, u64> = BTreeMap::new();
        for t in &self.terms {
            for &(p, e) in factorize(t.scale).pairs() {
                *exponents.entry(p).or_default() += e as u64 * t.exponent as u64;
            }
        }
        let negative = if weight_num % 2 == 1 {
            *exponents.entry(2).or_default() += 3;
            false
        } else {
            (weight_num / 2) % 2 == 1
        };
        let character = fundamental_from_exponents(negative, &exponents);

        Ok(ModularInvariants {
            weight_num,
            level,
            character,
            valuation: self.weighted_sum() / 24,
            lcm_scales,
        })
    }

    /// The q-expansion `a₀ + a₁q + … + a_{prec−1}q^{prec−1}`, indexed from
    /// `n = 0` so that `a₀ = … = a_{v−1} = 0` and `a_v = 1`.
    pub fn q_expansion(&self, prec: usize) -> Result<QSeries> {
        self.require_modular()?;
        let valuation = self.weighted_sum() / 24;
        if (prec as u64) <= valuation {
            return Err(Error::PrecisionTooSmall { prec, valuation });
        }
        let inner = prec - valuation as usize;
        // Densest factor first: every later factor costs prec × (its nonzeros).
        let mut acc: Option<QSeries> = None;
        for t in &self.terms {
            let factor = QSeries::euler_product(t.scale, inner);
            for _ in 0..t.exponent {
                acc = Some(match acc {
                    None => factor.clone(),
                    Some(a) => a.mul(&factor),
                });
            }
        }
        let acc = acc.expect("quotients are nonempty");
        Ok(acc.shift(valuation as usize))
    }

    /// Compact text form `m:r,m:r,…`.
    pub fn to_compact(&self) -> String {
        self.terms
            .iter()
            .map(|t| format!("{}:{}", t.scale, t.exponent))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for EtaQuotient {
    /// Human form, e.g. `eta(z)^2*eta(2z)^7*eta(4z)^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if t.scale == 1 {
                f.write_str("eta(z)")?;
            } else {
                write!(f, "eta({}z)", t.scale)?;
            }
            if t.exponent != 1 {
                write!(f, "^{}", t.exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Parses `eta(2z)*eta(11z)^2` style text or the compact `2:1,11:2` form.
///
/// The human form also accepts `η`, `eta(z)` for scale 1, a prefix exponent
/// `eta^2(z)`, braces `^{11}` and juxtaposition without `*`.
pub fn parse(text: &str) -> Result<EtaQuotient> {
    if text.contains("eta") || text.contains('η') {
        Parser::new(text).human()
    } else {
        parse_compact(text)
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn parse_compact(text: &str) -> Result<EtaQuotient> {
    let mut terms = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let (m, r) = piece
            .split_once(':')
            .ok_or_else(|| syntax(offset, "expected `m:r`"))?;
        let m: i64 = m
            .trim()
            .parse()
            .map_err(|_| syntax(offset, format!("invalid scale `{}`", m.trim())))?;
        let r: i64 = r
            .trim()
            .parse()
            .map_err(|_| syntax(offset, format!("invalid exponent `{}`", r.trim())))?;
        terms.push(checked_term(m, r)?);
        offset += piece.len() + 1;
    }
    EtaQuotient::new(terms)
}

fn checked_term(scale: i64, exponent: i64) -> Result<(u64, u32)> {
    if scale <= 0 {
        return Err(Error::ZeroScale);
    }
    if exponent <= 0 {
        return Err(Error::NonPositiveExponent {
            scale: scale as u64,
            exponent,
        });
    }
    let exponent = u32::try_from(exponent).map_err(|_| Error::NonPositiveExponent {
        scale: scale as u64,
        exponent,
    })?;
    Ok((scale as u64, exponent))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected `{token}`")))
        }
    }

    fn integer(&mut self) -> Result<Option<i64>> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let mut len = 0;
        if rest.starts_with('-') || rest.starts_with('+') {
            len = 1;
        }
        len += rest[len..].bytes().take_while(u8::is_ascii_digit).count();
        let digits = &rest[..len];
        if digits.is_empty() {
            return Ok(None);
        }
        self.pos += len;
        digits
            .parse()
            .map(Some)
            .map_err(|_| syntax(start, format!("invalid integer `{digits}`")))
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        if !self.eat("^") {
            return Ok(None);
        }
        let braced = self.eat("{");
        let at = self.pos;
        let value = self
            .integer()?
            .ok_or_else(|| syntax(at, "expected an exponent"))?;
        if braced {
            self.expect("}")?;
        }
        Ok(Some(value))
    }

    fn term(&mut self) -> Result<(u64, u32)> {
        if !(self.eat("eta") || self.eat("η")) {
            return Err(syntax(self.pos, "expected `eta`"));
        }
        let prefix = self.exponent()?;
        self.expect("(")?;
        let scale = self.integer()?.unwrap_or(1);
        self.expect("z")?;
        self.expect(")")?;
        let at = self.pos;
        let suffix = self.exponent()?;
        let exponent = match (prefix, suffix) {
            (Some(_), Some(_)) => return Err(syntax(at, "exponent given twice")),
            (Some(e), None) | (None, Some(e)) => e,
            (None, None) => 1,
        };
        checked_term(scale, exponent)
    }

    fn human(mut self) -> Result<EtaQuotient> {
        let mut terms = vec![self.term()?];
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            self.eat("*");
            terms.push(self.term()?);
        }
        EtaQuotient::new(terms)
    }
}
