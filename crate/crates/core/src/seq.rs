//! Finitely supported real sequences.
//!
//! A [`Seq`] stores the coefficients `x_1, x_2, ...` densely (index 0 of the
//! vector is `x_1`); everything past the end is zero. Construction strips
//! trailing zeros so two equal sequences have equal representations.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Seq {
    coeffs: Vec<f64>,
}

impl Seq {
    /// The zero sequence.
    pub fn zero() -> Self {
        Seq { coeffs: Vec::new() }
    }

    /// Builds a canonical sequence, rejecting NaN and infinities.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self::from_finite(coeffs))
    }

    /// Canonicalizes without the finiteness check. Callers guarantee finite input.
    pub(crate) fn from_finite(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        // -0.0 compares equal to 0.0 above; normalize the sign bit too
        for c in coeffs.iter_mut() {
            if *c == 0.0 {
                *c = 0.0;
            }
        }
        Seq { coeffs }
    }

    /// The unit vector `e_k` (1-based).
    pub fn unit(k: usize) -> Self {
        assert!(k >= 1, "unit vectors are 1-based");
        let mut v = vec![0.0; k];
        v[k - 1] = 1.0;
        Seq { coeffs: v }
    }

    /// Indicator of `{1, ..., n}`.
    pub fn indicator(n: usize) -> Self {
        Seq { coeffs: vec![1.0; n] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    /// Length of the stored prefix; equals the index of the last nonzero entry.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// 1-based coefficient access, zero beyond the support.
    pub fn get(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.coeffs.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| **c != 0.0).count()
    }

    pub fn scale(&self, c: f64) -> Seq {
        Seq::from_finite(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn abs(&self) -> Seq {
        Seq::from_finite(self.coeffs.iter().map(|x| x.abs()).collect())
    }

    pub fn add(&self, other: &Seq) -> Seq {
        let n = self.len().max(other.len());
        Seq::from_finite((1..=n).map(|k| self.get(k) + other.get(k)).collect())
    }

    pub fn sub(&self, other: &Seq) -> Seq {
        let n = self.len().max(other.len());
        Seq::from_finite((1..=n).map(|k| self.get(k) - other.get(k)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Reorders the stored prefix by `perm` (`out[i] = x[perm[i]]`).
    pub fn permute(&self, perm: &[usize]) -> Seq {
        assert_eq!(perm.len(), self.len(), "permutation length mismatch");
        Seq::from_finite(perm.iter().map(|&i| self.coeffs[i]).collect())
    }

    /// True when every entry is nonnegative and the entries are nonincreasing.
    pub fn is_decreasing_nonneg(&self) -> bool {
        self.coeffs.iter().all(|x| *x >= 0.0) && self.coeffs.windows(2).all(|w| w[0] >= w[1])
    }
}

impl TryFrom<Vec<f64>> for Seq {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Seq::new(v)
    }
}

impl From<Seq> for Vec<f64> {
    fn from(s: Seq) -> Self {
        s.coeffs
    }
}

impl Index<usize> for Seq {
    type Output = f64;

    /// 0-based access into the stored prefix.
    fn index(&self, i: usize) -> &f64 {
        &self.coeffs[i]
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Absolute values sorted into nonincreasing order, i.e. the decreasing
/// rearrangement `x*`. Ties keep their original relative order.
pub fn rearrange(x: &Seq) -> Seq {
    Seq::from_finite(rearranged_abs(x.as_slice()))
}

pub(crate) fn rearranged_abs(x: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = x.iter().map(|c| c.abs()).collect();
    // sort_by is stable
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    v
}

/// `x ⊕ y`: `y` placed directly after the last nonzero entry of `x`.
pub fn disjoint_sum(x: &Seq, y: &Seq) -> Seq {
    let mut v = x.coeffs.clone();
    v.extend_from_slice(&y.coeffs);
    Seq::from_finite(v)
}

/// Equality of the sorted multisets of nonzero (signed) entries.
pub fn same_ordered_distribution(x: &Seq, y: &Seq) -> bool {
    fn sorted_nonzero(s: &Seq) -> Vec<f64> {
        let mut v: Vec<f64> = s.coeffs.iter().copied().filter(|c| *c != 0.0).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        v
    }
    sorted_nonzero(x) == sorted_nonzero(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Seq {
        Seq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rearrange_examples() {
        assert_eq!(rearrange(&s(&[0.0, -3.0, 1.0])), s(&[3.0, 1.0]));
        assert_eq!(rearrange(&s(&[5.0])), s(&[5.0]));
        assert_eq!(rearrange(&s(&[1.0, 1.0, 1.0])), s(&[1.0, 1.0, 1.0]));
    }

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let x = s(&[1.0, 0.0, 0.0]);
        assert_eq!(x.len(), 1);
        assert!(s(&[0.0, -0.0]).is_zero());
        assert_eq!(s(&[0.0, 2.0]).as_slice(), &[0.0, 2.0]);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            Seq::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(Seq::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn disjoint_sum_examples() {
        assert_eq!(disjoint_sum(&s(&[1.0, 2.0]), &s(&[3.0])), s(&[1.0, 2.0, 3.0]));
        assert_eq!(disjoint_sum(&s(&[0.0]), &s(&[7.0])), s(&[7.0]));
        assert_eq!(disjoint_sum(&s(&[5.0]), &s(&[0.0])), s(&[5.0]));
    }

    #[test]
    fn ordered_distribution_examples() {
        assert!(same_ordered_distribution(&s(&[1.0, 2.0, 0.0, 3.0]), &s(&[3.0, 1.0, 2.0])));
        assert!(!same_ordered_distribution(&s(&[1.0, 1.0]), &s(&[1.0])));
        assert!(!same_ordered_distribution(&s(&[1.0, -2.0]), &s(&[1.0, 2.0])));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let x: Seq = serde_json::from_str("[1.5, 0, -2, 0]").unwrap();
        assert_eq!(x.as_slice(), &[1.5, 0.0, -2.0]);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[1.5,0.0,-2.0]");
        assert!(serde_json::from_str::<Seq>("[1e999]").is_err());
    }

    #[test]
    fn rearrange_exhaustive_small_lengths() {
        // every sign/zero pattern over a fixed magnitude profile, lengths up to 12
        for len in 0..=12usize {
            let base: Vec<f64> = (0..len).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
            let x = s(&base);
            let r = rearrange(&x);
            assert!(r.is_decreasing_nonneg());
            assert_eq!(rearrange(&r), r);
            let mut a: Vec<f64> = base.iter().map(|v| v.abs()).filter(|v| *v != 0.0).collect();
            let mut b: Vec<f64> = r.as_slice().iter().copied().filter(|v| *v != 0.0).collect();
            a.sort_by(|p, q| p.partial_cmp(q).unwrap());
            b.sort_by(|p, q| p.partial_cmp(q).unwrap());
            assert_eq!(a, b);
        }
    }
}
