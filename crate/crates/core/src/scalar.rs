//! Scalar abstraction so the coordinate operators run both on `f64` and on
//! exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use std::fmt::Debug;

pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Num + Signed {
    fn from_usize(n: usize) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact types ignore `tol`.
    fn close_to(&self, other: &Self, tol: f64) -> bool;

    fn is_exact() -> bool;

    fn powi(&self, n: i32) -> Self {
        let mut acc = Self::one();
        let base = if n >= 0 {
            self.clone()
        } else {
            Self::one() / self.clone()
        };
        for _ in 0..n.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_usize(n: usize) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn close_to(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol * self.abs().max(other.abs()).max(1.0)
    }

    fn is_exact() -> bool {
        false
    }

    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
}

impl Scalar for BigRational {
    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn close_to(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_exact() -> bool {
        true
    }
}

/// `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Drops trailing zeros so exact vectors compare structurally.
pub fn trim<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}
