//! Workloads shared by the benchmarks in `benches/`.

use etaq_core::QSeries;
use num_bigint::{BigInt, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A dense series of `prec` coefficients, each uniform in `(−2^bits, 2^bits)`.
pub fn wide_series(prec: usize, bits: u64, seed: u64) -> QSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = BigInt::from(1) << bits;
    let low = -&bound;
    QSeries::from_coeffs(
        (0..prec)
            .map(|_| rng.gen_bigint_range(&low, &bound))
            .collect(),
    )
}
