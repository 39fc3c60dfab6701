//! Multimodular number-theoretic transform for dense products.
//!
//! Coefficients are reduced modulo a handful of 31-bit primes `c·2^k + 1`,
//! multiplied by NTT in each field, and lifted back with Garner's algorithm.
//! Enough primes are taken that their product exceeds twice the largest
//! possible output coefficient, so the lift is exact.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::CoeffSlice;
use crate::arith::{factorize, is_prime, pow_mod};

const TWO_ADICITY: u32 = 22;

#[derive(Clone, Copy, Debug)]
pub(crate) struct NttPrime {
    pub p: u64,
    root: u64,
}

/// All primes `c·2^22 + 1 < 2^31`, largest first, with a primitive root.
pub(crate) fn ntt_primes() -> &'static [NttPrime] {
    static PRIMES: OnceLock<Vec<NttPrime>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let max_c = ((1u64 << 31) - 1) >> TWO_ADICITY;
        (1..=max_c)
            .rev()
            .map(|c| (c << TWO_ADICITY) + 1)
            .filter(|&p| is_prime(p))
            .map(|p| NttPrime {
                p,
                root: primitive_root(p),
            })
            .collect()
    })
}

fn primitive_root(p: u64) -> u64 {
    let factors: Vec<u64> = factorize(p - 1).primes().collect();
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Largest supported transform length.
pub(crate) const MAX_LEN: usize = 1 << TWO_ADICITY;

fn transform(a: &mut [u64], prime: NttPrime, inverse: bool) {
    let n = a.len();
    let p = prime.p;
    debug_assert!(n.is_power_of_two() && n <= MAX_LEN);

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(prime.root, (p - 1) / len as u64, p);
        if inverse {
            w_len = pow_mod(w_len, p - 2, p);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = w * w_len % p;
        }
        for block in a.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(half);
            for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = *y * w % p;
                *x = if u + v >= p { u + v - p } else { u + v };
                *y = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }

    if inverse {
        let n_inv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * n_inv % p;
        }
    }
}

fn reduce(a: CoeffSlice<'_>, len: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    match a {
        CoeffSlice::Small(v) => {
            for (o, &c) in out.iter_mut().zip(v) {
                *o = c.rem_euclid(p as i128) as u64;
            }
        }
        CoeffSlice::Big(v) => {
            let m = BigInt::from(p);
            for (o, c) in out.iter_mut().zip(v) {
                let r = c % &m;
                let r = if r.sign() == Sign::Minus { r + &m } else { r };
                *o = r.to_u64().expect("residue fits in u64");
            }
        }
    }
    out
}

/// Number of primes whose product exceeds `2^bits`, or `None` if the prime
/// pool is too small.
pub(crate) fn primes_needed(bits: u64) -> Option<usize> {
    let target = BigUint::one() << bits;
    let mut m = BigUint::one();
    for (i, pr) in ntt_primes().iter().enumerate() {
        m *= pr.p;
        if m > target {
            return Some(i + 1);
        }
    }
    None
}

/// Result of a multimodular product before it is lifted to integers.
pub(crate) enum Lifted {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// Truncated product of `a` and `b` to `prec` terms using `count` primes.
pub(crate) fn mul(a: CoeffSlice<'_>, b: CoeffSlice<'_>, prec: usize, count: usize) -> Lifted {
    let len = (a.len() + b.len()).saturating_sub(1).next_power_of_two();
    assert!(len <= MAX_LEN, "product length {len} exceeds NTT capacity");
    let primes = &ntt_primes()[..count];

    let residues: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&prime| {
            let mut fa = reduce(a, len, prime.p);
            let mut fb = reduce(b, len, prime.p);
            transform(&mut fa, prime, false);
            transform(&mut fb, prime, false);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = *x * y % prime.p;
            }
            transform(&mut fa, prime, true);
            fa.truncate(prec);
            fa
        })
        .collect();

    // Garner constants: inverse of p_0 ⋯ p_{i-1} modulo p_i.
    let inverses: Vec<u64> = (0..count)
        .map(|i| {
            let pi = primes[i].p;
            let prod = primes[..i]
                .iter()
                .fold(1u64, |acc, q| acc * (q.p % pi) % pi);
            pow_mod(prod, pi - 2, pi)
        })
        .collect();

    let digits = |n: usize| -> Vec<u64> {
        let mut x = Vec::with_capacity(count);
        for i in 0..count {
            let pi = primes[i].p;
            let mut acc = 0u64;
            let mut radix = 1u64;
            for (j, &xj) in x.iter().enumerate() {
                acc = (acc + xj * radix) % pi;
                radix = radix * (primes[j].p % pi) % pi;
            }
            let r = residues[i][n];
            x.push((r + pi - acc) % pi * inverses[i] % pi);
        }
        x
    };

    if count <= 4 {
        let modulus: u128 = primes.iter().map(|q| q.p as u128).product();
        let half = modulus / 2;
        let out = (0..prec)
            .into_par_iter()
            .map(|n| {
                let x = digits(n);
                let mut value = 0u128;
                for i in (0..count).rev() {
                    value = value * primes[i].p as u128 + x[i] as u128;
                }
                if value > half {
                    -((modulus - value) as i128)
                } else {
                    value as i128
                }
            })
            .collect();
        Lifted::Small(out)
    } else {
        let modulus: BigUint = primes.iter().map(|q| BigUint::from(q.p)).product();
        let half = &modulus >> 1;
        let out = (0..prec)
            .into_par_iter()
            .map(|n| {
                let x = digits(n);
                let mut value = BigUint::zero();
                for i in (0..count).rev() {
                    value = value * primes[i].p + x[i];
                }
                if value > half {
                    -BigInt::from(&modulus - value)
                } else {
                    BigInt::from(value)
                }
            })
            .collect();
        Lifted::Big(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_pool() {
        let primes = ntt_primes();
        assert!(primes.len() >= 8, "only {} primes", primes.len());
        for pr in primes {
            assert!(pr.p < 1 << 31);
            assert_eq!((pr.p - 1) % (1 << TWO_ADICITY), 0);
            assert_eq!(pow_mod(pr.root, (pr.p - 1) / 2, pr.p), pr.p - 1);
        }
    }

    #[test]
    fn transform_round_trip() {
        let prime = ntt_primes()[0];
        let orig: Vec<u64> = (0..64u64).map(|i| (i * i * 7 + 3) % prime.p).collect();
        let mut a = orig.clone();
        transform(&mut a, prime, false);
        transform(&mut a, prime, true);
        assert_eq!(a, orig);
    }
}
