//! Hecke operators `T_{p²}` in half-integral weight, the Sturm and Purkait
//! bounds, and eigenform certification for eta quotients.
//!
//! For `f = ∑ aₙqⁿ` of weight `k/2`, `k = 2λ + 1`, level `N` and character
//! `χ`, the image `T_{p²} f = ∑ bₙqⁿ` has
//!
//! ```text
//! bₙ = a_{p²n} + χ(p) ((−1)^λ n / p) p^{λ−1} aₙ + χ(p²) p^{k−2} a_{n/p²}
//! ```
//!
//! where `a_{n/p²} = 0` unless `p² | n`. The formula is stated for `p ∤ N`;
//! at `p | N` we evaluate it with `χ(p) = 0`, which leaves `bₙ = a_{p²n}`.
//! Those primes are reported but do not decide the verdict.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::arith::{gamma0_index, is_prime, kronecker, primes_up_to, primes_up_to_rational};
use crate::error::{Error, Result};
use crate::eta::{EtaQuotient, ModularInvariants};
use crate::qseries::QSeries;

/// Prime cap used when the caller does not give one.
pub const DEFAULT_PRIME_CAP: u64 = 30;

/// `floor(k · μ(N) / 24) + 1` for weight `k/2`: forms in the same space that
/// agree on `a₀ … a_s` are equal.
pub fn sturm_bound(level: u64, weight_num: u32) -> u64 {
    weight_num as u64 * gamma0_index(level) / 24 + 1
}

/// Purkait's bound `R = (k−1)m/12 − (m−1)/N'` with `N' = N/2` and
/// `m = N'² ∏_{p | N'} (1 − 1/p²)`. Requires odd `k >= 3` and `4 | N`.
pub fn purkait_bound(level: u64, weight_num: u32) -> Result<BigRational> {
    if weight_num < 3 || weight_num % 2 == 0 || level % 4 != 0 {
        return Err(Error::PurkaitDomain { weight_num, level });
    }
    let half_level = level / 2;
    let purkait_m = purkait_index(half_level);
    let m = BigRational::from_integer(BigInt::from(purkait_m));
    let k = BigInt::from(weight_num);
    Ok(&m * (k - 1) / BigInt::from(12) - (&m - BigInt::one()) / BigInt::from(half_level))
}

/// `N'² ∏_{p | N'} (1 − 1/p²)`, always an integer.
fn purkait_index(n: u64) -> u64 {
    crate::arith::factorize(n)
        .pairs()
        .iter()
        .fold(n * n, |acc, &(p, _)| acc / (p * p) * (p * p - 1))
}

/// Everything `T_{p²}` needs to know about the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeContext {
    /// Odd weight numerator `k = 2λ + 1`.
    pub weight_num: u32,
    pub lambda: u32,
    pub level: u64,
    /// Fundamental discriminant of `χ`, 1 for trivial.
    pub character: i64,
    pub sturm: u64,
    /// Absent when `k = 1`.
    pub purkait_r: Option<BigRational>,
}

impl HeckeContext {
    pub fn new(weight_num: u32, level: u64, character: i64) -> Result<Self> {
        if weight_num % 2 == 0 {
            return Err(Error::IntegralWeight { weight_num });
        }
        if level % 4 != 0 {
            return Err(Error::LevelNotDivisibleByFour { level });
        }
        Ok(HeckeContext {
            weight_num,
            lambda: (weight_num - 1) / 2,
            level,
            character,
            sturm: sturm_bound(level, weight_num),
            purkait_r: (weight_num >= 3)
                .then(|| purkait_bound(level, weight_num))
                .transpose()?,
        })
    }

    pub fn from_invariants(inv: &ModularInvariants) -> Result<Self> {
        Self::new(inv.weight_num, inv.level, inv.character)
    }

    /// `χ(t)`: the Kronecker symbol `(D/t)` on `t` coprime to `N`, else 0.
    pub fn chi(&self, t: u64) -> i8 {
        if t.gcd(&self.level) != 1 {
            return 0;
        }
        kronecker(self.character, t as i64).expect("t is nonzero")
    }

    /// Whether Koblitz's hypothesis `p ∤ N` holds.
    pub fn is_koblitz_prime(&self, p: u64) -> bool {
        self.level % p != 0
    }
}

/// Coefficients of `T_{p²} f`, kept as integer numerators over a common
/// denominator (`p` in weight 1/2, otherwise 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeImage {
    pub prime: u64,
    pub denominator: BigInt,
    pub numerators: Vec<BigInt>,
}

impl HeckeImage {
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn value(&self, n: usize) -> BigRational {
        BigRational::new(self.numerators[n].clone(), self.denominator.clone())
    }
}

/// Applies `T_{p²}` to the coefficients `a₀ … a_{P−1}` of `f`, producing
/// `bₙ` for every `n` with `p²n < P`.
pub fn apply_tp2(a: &QSeries, p: u64, ctx: &HeckeContext) -> Result<HeckeImage> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let prec = a.prec();
    let p2 = (p * p) as usize;
    if prec < p2 {
        return Err(Error::InsufficientPrecision { prime: p, prec });
    }
    Ok(tp2_prefix(a, p, ctx, prec.div_ceil(p2)))
}

/// `b₀ … b_{len−1}`; the caller guarantees `p²(len − 1) < P`.
fn tp2_prefix(a: &QSeries, p: u64, ctx: &HeckeContext, len: usize) -> HeckeImage {
    let p2 = (p * p) as usize;

    let lambda = ctx.lambda;
    let chi_p = ctx.chi(p);
    let pb = BigInt::from(p);
    // Scale everything by p when λ = 0 so that p^{λ−1} and p^{k−2} are integral.
    let (denominator, middle, last) = if lambda == 0 {
        (pb.clone(), BigInt::one(), BigInt::one())
    } else {
        (
            BigInt::one(),
            Pow::pow(&pb, lambda - 1),
            Pow::pow(&pb, ctx.weight_num - 2),
        )
    };
    let last = last * (chi_p as i32 * chi_p as i32);
    let sign: i64 = if lambda % 2 == 0 { 1 } else { -1 };

    let mut numerators = Vec::with_capacity(len);
    for n in 0..len {
        let mut b = a.coeff(p2 * n) * &denominator;
        if chi_p != 0 {
            let symbol = kronecker(sign * n as i64, p as i64).expect("p is nonzero");
            if symbol != 0 {
                let an = a.coeff(n);
                if !an.is_zero() {
                    b += an * &middle * (chi_p as i32 * symbol as i32);
                }
            }
            if n % p2 == 0 {
                b += a.coeff(n / p2) * &last;
            }
        }
        numerators.push(b);
    }
    HeckeImage {
        prime: p,
        denominator,
        numerators,
    }
}

/// Outcome of checking one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCheck {
    pub prime: u64,
    /// `b_{n₀} / a_{n₀}` at the first nonzero index `n₀` of `f`.
    pub eigenvalue: BigRational,
    /// Whether `bₙ a_{n₀} = b_{n₀} aₙ` for every `n <= s`.
    pub holds: bool,
    /// First index where the relation fails.
    pub failure_index: Option<u64>,
    /// `p ∤ N`; otherwise the value is an extension beyond Koblitz's
    /// stated hypothesis.
    pub koblitz: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every prime `p <= R` with `p ∤ N` passed. `vacuous` when no such
    /// prime exists.
    EigenformCertified { vacuous: bool },
    /// Every checked prime passed, but the cap stopped short of `R` (or the
    /// weight is 1/2, where no such bound is available).
    EigenformUpToCap,
    /// `T_{p²} f` is not a multiple of `f`: the relation fails at `index`.
    NotEigenform { prime: u64, index: u64 },
    /// No prime could be checked at all.
    NotApplicable,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::EigenformCertified { .. } => "eigenform_certified",
            Verdict::EigenformUpToCap => "eigenform_up_to_cap",
            Verdict::NotEigenform { .. } => "not_eigenform",
            Verdict::NotApplicable => "not_applicable",
        }
    }

    pub fn is_eigenform(&self) -> bool {
        matches!(
            self,
            Verdict::EigenformCertified { .. } | Verdict::EigenformUpToCap
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenReport {
    pub quotient: EtaQuotient,
    pub invariants: ModularInvariants,
    pub sturm: u64,
    pub purkait_r: Option<BigRational>,
    /// The cap the caller asked for, if any.
    pub prime_cap: Option<u64>,
    /// Largest prime bound actually used, `min(cap, floor(R))`.
    pub prime_bound: u64,
    /// Ascending; stops after the first failing Koblitz prime.
    pub primes: Vec<PrimeCheck>,
    pub verdict: Verdict,
}

impl EigenReport {
    pub fn eigenvalue(&self, p: u64) -> Option<&BigRational> {
        self.primes
            .iter()
            .find(|c| c.prime == p && c.holds)
            .map(|c| &c.eigenvalue)
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self.verdict, Verdict::EigenformCertified { vacuous: true })
    }
}

/// Cross-multiplication test of `T_{p²} f = λ f` on `n <= sturm`.
pub fn check_prime(f: &QSeries, p: u64, ctx: &HeckeContext) -> Result<PrimeCheck> {
    check_prime_to(f, p, ctx, ctx.sturm)
}

/// Cross-multiplication test on `n <= limit` only; needs `p² · limit + 1`
/// coefficients of `f`.
pub fn check_prime_to(f: &QSeries, p: u64, ctx: &HeckeContext, limit: u64) -> Result<PrimeCheck> {
    let needed = (p * p * limit + 1) as usize;
    if f.prec() < needed {
        return Err(Error::InsufficientPrecision {
            prime: p,
            prec: f.prec(),
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let limit = limit as usize;
    let image = tp2_prefix(f, p, ctx, limit + 1);
    let lead = f
        .valuation()
        .filter(|&v| v <= limit)
        .ok_or_else(|| Error::Invariant(format!("form vanishes on q^0 … q^{limit}")))?;
    let a_lead = f.coeff(lead);
    let b_lead = &image.numerators[lead];
    let failure = (0..=limit).find(|&n| &image.numerators[n] * &a_lead != b_lead * f.coeff(n));
    Ok(PrimeCheck {
        prime: p,
        eigenvalue: BigRational::new(b_lead.clone(), &image.denominator * &a_lead),
        holds: failure.is_none(),
        failure_index: failure.map(|n| n as u64),
        koblitz: ctx.is_koblitz_prime(p),
    })
}

/// Terms past the valuation examined by the probe stage of [`eigen_check`].
const PROBE_TERMS: u64 = 64;

/// Decides whether `F` is a Hecke eigenform.
///
/// Primes `p <= B` are checked in ascending order, with `B = min(cap, R)`
/// for `k >= 3` and `B = cap` for `k = 1` (cap defaults to 30 there, and to
/// `R` otherwise). The expansion is computed once, to `p_max² · s + 1`
/// terms; a cheaper prefix is tried first so most non-eigenforms are
/// rejected early.
pub fn eigen_check(quotient: &EtaQuotient, prime_cap: Option<u64>) -> Result<EigenReport> {
    let invariants = quotient.invariants()?;
    let ctx = HeckeContext::from_invariants(&invariants)?;
    let s = ctx.sturm;

    let (primes, full_range) = match (&ctx.purkait_r, prime_cap) {
        (Some(r), cap) => {
            let all = primes_up_to_rational(r);
            match cap {
                Some(c) if all.last().is_some_and(|&p| p > c) => {
                    (all.into_iter().filter(|&p| p <= c).collect(), false)
                }
                _ => (all, true),
            }
        }
        (None, cap) => (primes_up_to(cap.unwrap_or(DEFAULT_PRIME_CAP)), false),
    };
    let prime_bound = primes.last().copied().unwrap_or(0);

    let mut checks = Vec::with_capacity(primes.len());
    let mut verdict = None;

    let first_koblitz: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| ctx.is_koblitz_prime(p))
        .take(3)
        .collect();
    let early = first_koblitz.last().copied().unwrap_or(prime_bound);

    // Probe: the first few Koblitz primes on a short prefix. A failure there
    // is a failure of the full test at the same index, so only the primes
    // below it still need the full range.
    let probe = s.min(invariants.valuation + PROBE_TERMS);
    if probe < s && !first_koblitz.is_empty() {
        let f = quotient.q_expansion((early * early * probe + 1) as usize)?;
        let mut rejected = None;
        for &p in &first_koblitz {
            let check = check_prime_to(&f, p, &ctx, probe)?;
            if !check.holds {
                rejected = Some(check);
                break;
            }
        }
        if let Some(rejected) = rejected {
            let below: Vec<u64> = primes
                .iter()
                .copied()
                .filter(|&p| p < rejected.prime)
                .collect();
            if let Some(&top) = below.last() {
                let f = quotient.q_expansion((top * top * s + 1) as usize)?;
                for p in below {
                    let check = check_prime(&f, p, &ctx)?;
                    let failed = check.koblitz && !check.holds;
                    if failed {
                        verdict = Some(Verdict::NotEigenform {
                            prime: p,
                            index: check.failure_index.expect("failed check has an index"),
                        });
                    }
                    checks.push(check);
                    if failed {
                        break;
                    }
                }
            }
            if verdict.is_none() {
                verdict = Some(Verdict::NotEigenform {
                    prime: rejected.prime,
                    index: rejected.failure_index.expect("failed check has an index"),
                });
                checks.push(rejected);
            }
        }
    }

    // Stages: the first few Koblitz primes, then everything.
    let mut done = 0u64;
    for stage_max in [early, prime_bound] {
        if verdict.is_some() || stage_max <= done {
            continue;
        }
        let prec = (stage_max * stage_max * s + 1) as usize;
        let f = quotient.q_expansion(prec)?;
        for p in primes
            .iter()
            .copied()
            .filter(|&p| p > done && p <= stage_max)
        {
            let check = check_prime(&f, p, &ctx)?;
            let failed = check.koblitz && !check.holds;
            if failed {
                verdict = Some(Verdict::NotEigenform {
                    prime: p,
                    index: check.failure_index.expect("failed check has an index"),
                });
            }
            checks.push(check);
            if failed {
                break;
            }
        }
        done = stage_max;
    }

    let koblitz_checked = checks.iter().filter(|c| c.koblitz).count();
    let verdict = verdict.unwrap_or(match (&ctx.purkait_r, full_range) {
        (Some(_), true) => Verdict::EigenformCertified {
            vacuous: koblitz_checked == 0,
        },
        _ if koblitz_checked == 0 => Verdict::NotApplicable,
        _ => Verdict::EigenformUpToCap,
    });

    Ok(EigenReport {
        quotient: quotient.clone(),
        invariants,
        sturm: s,
        purkait_r: ctx.purkait_r,
        prime_cap,
        prime_bound,
        primes: checks,
        verdict,
    })
}
