//! Shared oracles for integration tests: exact rational orbit
//! iteration and a naive quadratic overlap scan. These deliberately
//! avoid the library's working-precision code paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use abshift::symbolic::DigitSeq;

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn floor_int(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

fn ceil_int(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// Exact itinerary of 0 under `x -> beta*x + alpha - floor(beta*x + alpha)`.
pub fn rational_itinerary_of_zero(
    alpha: &BigRational,
    beta: &BigRational,
    n: usize,
) -> Vec<u64> {
    let mut x = BigRational::zero();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let t = beta * &x + alpha;
        let d = floor_int(&t);
        digits.push(d.to_u64().expect("digit fits"));
        x = t - BigRational::from_integer(d);
    }
    digits
}

/// Exact left-limit itinerary of 1: the orbit lives in (0, 1] and the
/// digit is `ceil(beta*y + alpha) - 1`.
pub fn rational_itinerary_of_one(
    alpha: &BigRational,
    beta: &BigRational,
    n: usize,
) -> Vec<u64> {
    let mut y = BigRational::one();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let t = beta * &y + alpha;
        let d = ceil_int(&t) - BigInt::one();
        assert!(!d.is_negative(), "left-limit digit went negative");
        digits.push(d.to_u64().expect("digit fits"));
        y = t - BigRational::from_integer(d);
    }
    digits
}

/// Naive quadratic overlap scan: every `n <= depth_n` such that the
/// `(n+1)`-prefix of `target` occurs in `source` at some offset
/// `j` in `[start, depth_j]`.
pub fn naive_overlap_found(
    target: &DigitSeq,
    source: &DigitSeq,
    depth_n: usize,
    depth_j: usize,
    start: usize,
) -> Vec<usize> {
    let mut found = Vec::new();
    for n in 0..=depth_n {
        let mut hit = false;
        'offsets: for j in start..=depth_j {
            for i in 0..=n {
                match (target.get(i), source.get(j + i)) {
                    (Some(a), Some(b)) if a == b => {}
                    _ => continue 'offsets,
                }
            }
            hit = true;
            break;
        }
        if hit {
            found.push(n);
        }
    }
    found
}
