//! Seeded random test vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic generator for a `(master, stream)` pair.
pub fn rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(master);
    r.set_stream(stream);
    r
}

pub fn gaussian(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Reversed cumulative sums of `|N(0,1)|` increments, scaled to max 1.
pub fn decreasing(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let mut acc = 0.0;
    let mut v: Vec<f64> = (0..len)
        .map(|_| {
            acc += rng.sample::<f64, _>(StandardNormal).abs();
            acc
        })
        .collect();
    v.reverse();
    let m = v.first().copied().unwrap_or(1.0);
    if m > 0.0 {
        v.iter_mut().for_each(|x| *x /= m);
    }
    v
}

/// Length drawn log-uniformly from `[1, max]`.
pub fn length(rng: &mut impl Rng, max: usize) -> usize {
    let e = rng.gen::<f64>() * (max as f64).ln();
    (e.exp().floor() as usize).clamp(1, max)
}

/// Small random rational with numerator in `[-num, num]` and denominator in `[1, den]`.
pub fn rational(rng: &mut impl Rng, num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(rng.gen_range(1..=den)))
}

pub fn positive_rational(rng: &mut impl Rng, num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(1..=num)), BigInt::from(rng.gen_range(1..=den)))
}
