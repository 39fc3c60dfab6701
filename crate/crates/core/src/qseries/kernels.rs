use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{shrink, CoeffSlice, Coeffs};

const CHUNK: usize = 1 << 14;

/// Convolution driven by the nonzero terms of `sparse`. With every term of
/// `sparse` this is plain schoolbook multiplication.
///
/// `bound_bits` bounds the bit length of every output coefficient (sign
/// included); when it fits the machine-word path cannot overflow.
pub(super) fn sparse_mul(
    sparse: CoeffSlice<'_>,
    dense: CoeffSlice<'_>,
    prec: usize,
    bound_bits: u64,
) -> Coeffs {
    match (sparse, dense) {
        (CoeffSlice::Small(s), CoeffSlice::Small(d)) if bound_bits <= 127 => {
            let terms: Vec<(usize, i128)> = s
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, &c)| (i, c))
                .collect();
            Coeffs::Small(small_kernel(&terms, d, prec))
        }
        _ => {
            let terms: Vec<(usize, BigInt)> = sparse
                .to_big()
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            shrink(big_kernel(&terms, &dense.to_big(), prec))
        }
    }
}

fn small_kernel(terms: &[(usize, i128)], dense: &[i128], prec: usize) -> Vec<i128> {
    let mut out = vec![0i128; prec];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(ci, chunk)| {
            let lo = ci * CHUNK;
            let hi = lo + chunk.len();
            for &(j, c) in terms {
                if j >= hi {
                    break;
                }
                let start = lo.max(j);
                let src = &dense[start - j..hi - j];
                let dst = &mut chunk[start - lo..];
                match c {
                    1 => dst.iter_mut().zip(src).for_each(|(o, x)| *o += x),
                    -1 => dst.iter_mut().zip(src).for_each(|(o, x)| *o -= x),
                    _ => dst.iter_mut().zip(src).for_each(|(o, x)| *o += c * x),
                }
            }
        });
    out
}

fn big_kernel(terms: &[(usize, BigInt)], dense: &[BigInt], prec: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); prec];
    out.par_chunks_mut(CHUNK / 16)
        .enumerate()
        .for_each(|(ci, chunk)| {
            let lo = ci * (CHUNK / 16);
            let hi = lo + chunk.len();
            for (j, c) in terms {
                let j = *j;
                if j >= hi {
                    break;
                }
                let start = lo.max(j);
                for n in start..hi {
                    let x = &dense[n - j];
                    if !x.is_zero() {
                        chunk[n - lo] += c * x;
                    }
                }
            }
        });
    out
}
