//! Truncated power series `∑ cₙ qⁿ + O(q^prec)` with exact integer
//! coefficients.
//!
//! Coefficients live in `i128` while they fit and silently move to
//! [`BigInt`] when they do not. Every kernel checks an a-priori bound before
//! taking the machine-word path, so results are exact either way.

mod kernels;
mod ntt;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Storage for the coefficient vector. `Big` is used only when some
/// coefficient does not fit in an `i128`.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Coeffs {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

#[derive(Clone, Copy)]
pub(crate) enum CoeffSlice<'a> {
    Small(&'a [i128]),
    Big(&'a [BigInt]),
}

impl<'a> CoeffSlice<'a> {
    pub(crate) fn len(&self) -> usize {
        match self {
            CoeffSlice::Small(v) => v.len(),
            CoeffSlice::Big(v) => v.len(),
        }
    }

    fn truncate(self, n: usize) -> Self {
        match self {
            CoeffSlice::Small(v) => CoeffSlice::Small(&v[..n.min(v.len())]),
            CoeffSlice::Big(v) => CoeffSlice::Big(&v[..n.min(v.len())]),
        }
    }

    fn nonzeros(&self) -> usize {
        match self {
            CoeffSlice::Small(v) => v.iter().filter(|c| **c != 0).count(),
            CoeffSlice::Big(v) => v.iter().filter(|c| !c.is_zero()).count(),
        }
    }

    /// Bit length of the largest absolute coefficient.
    fn max_bits(&self) -> u64 {
        match self {
            CoeffSlice::Small(v) => v
                .iter()
                .map(|c| 128 - c.unsigned_abs().leading_zeros() as u64)
                .max()
                .unwrap_or(0),
            CoeffSlice::Big(v) => v.iter().map(|c| c.bits()).max().unwrap_or(0),
        }
    }

    fn to_big(self) -> Vec<BigInt> {
        match self {
            CoeffSlice::Small(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
            CoeffSlice::Big(v) => v.to_vec(),
        }
    }
}

/// A truncated formal power series in `q` over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Coeffs,
}

fn shrink(v: Vec<BigInt>) -> Coeffs {
    let small: Option<Vec<i128>> = v.iter().map(|c| c.to_i128()).collect();
    match small {
        Some(s) => Coeffs::Small(s),
        None => Coeffs::Big(v),
    }
}

impl QSeries {
    /// Builds a series from `c₀, …, c_{prec−1}`.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs` is empty; precision is always at least one.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "precision must be positive");
        QSeries {
            coeffs: shrink(coeffs),
        }
    }

    pub fn from_i128(coeffs: Vec<i128>) -> Self {
        assert!(!coeffs.is_empty(), "precision must be positive");
        QSeries {
            coeffs: Coeffs::Small(coeffs),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_i128(coeffs.iter().map(|&c| c as i128).collect())
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i128(vec![0; prec])
    }

    pub fn one(prec: usize) -> Self {
        Self::monomial(0, prec)
    }

    /// `q^n + O(q^prec)`; the zero series when `n >= prec`.
    pub fn monomial(n: usize, prec: usize) -> Self {
        let mut v = vec![0; prec];
        if n < prec {
            v[n] = 1;
        }
        Self::from_i128(v)
    }

    /// The product `∏_{n≥1} (1 − q^{scale·n})` to `prec` terms, read off
    /// from Euler's pentagonal-number identity: the coefficient at
    /// `scale·j(3j−1)/2` is `(−1)^j` for every integer `j`, zero elsewhere.
    pub fn euler_product(scale: u64, prec: usize) -> Self {
        assert!(scale >= 1, "scale must be positive");
        assert!(prec >= 1, "precision must be positive");
        let mut v = vec![0i128; prec];
        v[0] = 1;
        let prec = prec as u64;
        for j in 1u64.. {
            let sign = if j % 2 == 1 { -1 } else { 1 };
            // j(3j−1)/2 < j(3j+1)/2, so the first exponent bounds the loop.
            let lo = (j * (3 * j - 1) / 2).saturating_mul(scale);
            if lo >= prec {
                break;
            }
            v[lo as usize] = sign;
            let hi = (j * (3 * j + 1) / 2).saturating_mul(scale);
            if hi < prec {
                v[hi as usize] = sign;
            }
        }
        Self::from_i128(v)
    }

    /// Number of known coefficients.
    pub fn prec(&self) -> usize {
        match &self.coeffs {
            Coeffs::Small(v) => v.len(),
            Coeffs::Big(v) => v.len(),
        }
    }

    pub(crate) fn slice(&self) -> CoeffSlice<'_> {
        match &self.coeffs {
            Coeffs::Small(v) => CoeffSlice::Small(v),
            Coeffs::Big(v) => CoeffSlice::Big(v),
        }
    }

    /// Coefficient of `qⁿ`.
    ///
    /// # Panics
    ///
    /// Panics if `n >= self.prec()`.
    pub fn coeff(&self, n: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Small(v) => BigInt::from(v[n]),
            Coeffs::Big(v) => v[n].clone(),
        }
    }

    /// Coefficient of `qⁿ` if it fits in an `i128`.
    pub fn coeff_i128(&self, n: usize) -> Option<i128> {
        match &self.coeffs {
            Coeffs::Small(v) => Some(v[n]),
            Coeffs::Big(v) => v[n].to_i128(),
        }
    }

    pub fn coeffs(&self) -> Vec<BigInt> {
        self.slice().to_big()
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        match &self.coeffs {
            Coeffs::Small(v) => v.iter().position(|c| *c != 0),
            Coeffs::Big(v) => v.iter().position(|c| !c.is_zero()),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.slice().nonzeros()
    }

    /// True when every coefficient fits in an `i128`.
    pub fn is_word_sized(&self) -> bool {
        matches!(self.coeffs, Coeffs::Small(_))
    }

    /// Drops terms of degree `>= prec`.
    pub fn truncate(&self, prec: usize) -> Self {
        assert!(
            prec >= 1 && prec <= self.prec(),
            "cannot raise precision by truncating"
        );
        match &self.coeffs {
            Coeffs::Small(v) => Self::from_i128(v[..prec].to_vec()),
            Coeffs::Big(v) => Self::from_coeffs(v[..prec].to_vec()),
        }
    }

    /// Multiplies by `q^shift`, keeping the precision at `self.prec() + shift`.
    pub fn shift(&self, shift: usize) -> Self {
        match &self.coeffs {
            Coeffs::Small(v) => {
                let mut out = vec![0; shift];
                out.extend_from_slice(v);
                Self::from_i128(out)
            }
            Coeffs::Big(v) => {
                let mut out = vec![BigInt::zero(); shift];
                out.extend_from_slice(v);
                Self::from_coeffs(out)
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if let (Coeffs::Small(v), Some(k)) = (&self.coeffs, k.to_i128()) {
            let scaled: Option<Vec<i128>> = v.iter().map(|c| c.checked_mul(k)).collect();
            if let Some(s) = scaled {
                return Self::from_i128(s);
            }
        }
        Self::from_coeffs(self.coeffs().into_iter().map(|c| c * k).collect())
    }

    /// Truncated product, at precision `min(self.prec(), other.prec())`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = self.prec().min(other.prec());
        let a = self.slice().truncate(prec);
        let b = other.slice().truncate(prec);
        let (na, nb) = (a.nonzeros(), b.nonzeros());
        if na == 0 || nb == 0 {
            return QSeries::zero(prec);
        }
        let (sparse, dense, nnz) = if na <= nb { (a, b, na) } else { (b, a, nb) };

        let bound_bits = a.max_bits() + b.max_bits() + (nnz as u64).ilog2() as u64 + 2;
        let ntt_primes = ntt::primes_needed(bound_bits);
        let ntt_len = (2 * prec).next_power_of_two();
        let use_ntt = match ntt_primes {
            Some(count) if ntt_len <= ntt::MAX_LEN && prec > 64 => {
                let log = ntt_len.ilog2() as f64;
                let ntt_cost = count as f64 * (6.0 * ntt_len as f64 * log + 8.0 * prec as f64);
                let sparse_cost = 2.0 * nnz as f64 * prec as f64;
                ntt_cost < sparse_cost
            }
            _ => false,
        };

        let coeffs = if use_ntt {
            match ntt::mul(sparse, dense, prec, ntt_primes.unwrap()) {
                ntt::Lifted::Small(v) => Coeffs::Small(v),
                ntt::Lifted::Big(v) => shrink(v),
            }
        } else {
            kernels::sparse_mul(sparse, dense, prec, bound_bits)
        };
        QSeries { coeffs }
    }

    /// `self^e` by binary exponentiation; `pow(0)` is the series `1`.
    pub fn pow(&self, mut e: u64) -> QSeries {
        let mut acc = QSeries::one(self.prec());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn zip_with(
        &self,
        other: &QSeries,
        small: impl Fn(i128, i128) -> Option<i128>,
        big: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> QSeries {
        let prec = self.prec().min(other.prec());
        if let (Coeffs::Small(a), Coeffs::Small(b)) = (&self.coeffs, &other.coeffs) {
            let out: Option<Vec<i128>> = a[..prec]
                .iter()
                .zip(&b[..prec])
                .map(|(&x, &y)| small(x, y))
                .collect();
            if let Some(out) = out {
                return QSeries::from_i128(out);
            }
        }
        let a = self.slice().truncate(prec).to_big();
        let b = other.slice().truncate(prec).to_big();
        QSeries::from_coeffs(a.iter().zip(&b).map(|(x, y)| big(x, y)).collect())
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, i128::checked_add, |x, y| x + y)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, i128::checked_sub, |x, y| x - y)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-BigInt::one())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

impl fmt::Display for QSeries {
    /// Renders as `1 - q - q^2 + q^5 + O(q^13)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = mag.is_one() && n > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match n {
                0 => {}
                1 if unit => f.write_str("q")?,
                1 => f.write_str("*q")?,
                _ if unit => write!(f, "q^{n}")?,
                _ => write!(f, "*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}
