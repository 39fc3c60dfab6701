//! Multiplying two dense series of 2·10⁵ terms with coefficients near 10³⁰.

use std::time::{Duration, Instant};

use etaq_core::QSeries;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_wide(prec: usize, seed: u64) -> Vec<i128> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // |c| < 2^100 ≈ 1.27·10³⁰
    (0..prec).map(|_| rng.gen::<i128>() >> 27).collect()
}

#[test]
fn dense_product_of_two_hundred_thousand_terms() {
    let prec = 200_000;
    let (a, b) = (random_wide(prec, 11), random_wide(prec, 12));
    let (fa, fb) = (QSeries::from_i128(a.clone()), QSeries::from_i128(b.clone()));

    let started = Instant::now();
    let product = fa.mul(&fb);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    assert_eq!(product.prec(), prec);

    // direct convolution at a spread of indices
    for n in [0usize, 1, 2, 777, 65_536, 123_457, 199_998, 199_999] {
        let direct: BigInt = (0..=n).map(|i| BigInt::from(a[i]) * b[n - i]).sum();
        assert_eq!(product.coeff(n), direct, "coefficient {n}");
    }
}
