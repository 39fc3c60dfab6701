//! Exact integer number theory: factorization, prime sieving, Kronecker
//! symbols, fundamental discriminants and the index of Γ₀(N).

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Prime factorization `n = ∏ p^e`, primes strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies the factors back together.
    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factorizes `n` by trial division. `factorize(1)` is the empty product.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1, "cannot factorize 0");
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // 6k ± 1 wheel
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        for q in [p, p + 2] {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            if e > 0 {
                out.push((q, e));
            }
        }
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Factorization(out)
}

/// The primes `p <= limit`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = usize::try_from(limit).expect("sieve limit exceeds address space");
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// The primes `p <= floor(bound)` for a rational bound. Negative bounds give
/// no primes.
pub fn primes_up_to_rational(bound: &BigRational) -> Vec<u64> {
    if bound.is_negative() {
        return Vec::new();
    }
    let limit = bound.floor().to_integer().to_u64().unwrap_or(u64::MAX);
    primes_up_to(limit)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, valid for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i128, n: i128) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// The Kronecker symbol `(a/n)`.
///
/// Conventions: `(a/2)` is 0 for even `a`, +1 for `a ≡ ±1 (mod 8)` and -1
/// for `a ≡ ±3 (mod 8)`; `(a/-1)` is -1 exactly when `a < 0`; `(a/0)` is 1
/// for `a = ±1` and 0 otherwise.
pub fn kronecker(a: i64, n: i64) -> Result<i8> {
    if a == 0 && n == 0 {
        return Err(Error::KroneckerUndefined);
    }
    let a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return Ok(if a.abs() == 1 { 1 } else { 0 });
    }
    let mut sign = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            sign = -sign;
        }
        n >>= twos;
    }
    Ok(sign * jacobi(a, n))
}

/// Fundamental discriminant of `sign · ∏ p^e`, or 1 when that number is a
/// perfect square.
pub(crate) fn fundamental_from_exponents(negative: bool, exponents: &BTreeMap<u64, u64>) -> i64 {
    let mut kernel: i64 = exponents
        .iter()
        .filter(|(_, &e)| e % 2 == 1)
        .map(|(&p, _)| p as i64)
        .product();
    if negative {
        kernel = -kernel;
    }
    if kernel == 1 {
        1
    } else if kernel.rem_euclid(4) == 1 {
        kernel
    } else {
        4 * kernel
    }
}

/// Canonical representative of the quadratic character `χ_D`: 1 if `D` is a
/// perfect square, otherwise the fundamental discriminant of `ℚ(√D)`.
pub fn normalize_character(d: i64) -> Result<i64> {
    if d == 0 {
        return Err(Error::ZeroDiscriminant);
    }
    let mut exps = BTreeMap::new();
    for &(p, e) in factorize(d.unsigned_abs()).pairs() {
        exps.insert(p, e as u64);
    }
    Ok(fundamental_from_exponents(d < 0, &exps))
}

/// Index `[SL₂(ℤ) : Γ₀(N)] = N ∏_{p|N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    factorize(n)
        .pairs()
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}
