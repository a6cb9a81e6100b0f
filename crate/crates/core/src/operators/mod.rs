//! Dilations, shifts, the doubling operator `D = τ_1 σ_2`, the block
//! embedding `S`, the averaging projections `Q` and `R_n`, and the shifted
//! operators `T_λ = τ_1 - λI`, `D_λ = D - λI`.
//!
//! Every operator is a sparse index map, so application is a direct
//! coordinate program over a slice; nothing is ever stored as a matrix.

mod search;

pub(crate) use search::cone_minimize;
pub use search::{
    lorentz_dilation_norm, operator_norm_lower, spectral_radius_estimate, NormCertificate, SearchConfig, SpectralRadiusReport,
    Strategy,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{trim, Scalar};
use crate::seq::Seq;

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec<S = f64> {
    /// `σ_m`: every entry repeated `m` times.
    DilateUp(usize),
    /// `σ_{1/m}`: means over consecutive blocks of length `m`.
    DilateDown(usize),
    /// `τ_n`; negative `n` drops the first `|n|` entries.
    Shift(i64),
    /// `D = τ_1 σ_2`.
    Doubling,
    /// `D^{-1} = σ_{1/2} τ_{-1}`.
    DoublingInverse,
    /// `S`: `a_k` spread over the dyadic block `[2^{k-1}, 2^k - 1]`.
    BlockEmbed,
    /// `Q`: means over the dyadic blocks.
    AvgProject,
    /// `R_n`: means over consecutive blocks of length `2^n`.
    AvgProjectN(u32),
    /// `T_λ = τ_1 - λI`.
    ShiftMinusLambda(S),
    /// `D_λ = D - λI`.
    DoublingMinusLambda(S),
    /// Composition; the last element acts first.
    Compose(Vec<OperatorSpec<S>>),
}

impl<S: Scalar> OperatorSpec<S> {
    /// `op^n` as a lazy composition.
    pub fn power(&self, n: u32) -> OperatorSpec<S> {
        match n {
            0 => OperatorSpec::Shift(0),
            1 => self.clone(),
            _ => OperatorSpec::Compose(vec![self.clone(); n as usize]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorSpec::DilateUp(m) | OperatorSpec::DilateDown(m) if *m == 0 => {
                Err(Error::ParameterRange("dilation factor must be >= 1".into()))
            }
            OperatorSpec::AvgProjectN(n) if *n == 0 || *n > 40 => {
                Err(Error::ParameterRange(format!("R_n needs 1 <= n <= 40, got {n}")))
            }
            OperatorSpec::ShiftMinusLambda(l) | OperatorSpec::DoublingMinusLambda(l)
                if !l.is_positive() =>
            {
                Err(Error::ParameterRange("lambda must be > 0".into()))
            }
            OperatorSpec::Compose(ops) => ops.iter().try_for_each(|o| o.validate()),
            _ => Ok(()),
        }
    }

    /// Length of the output support bound for an input of length `len`,
    /// saturating instead of overflowing.
    pub fn output_len(&self, len: usize) -> u128 {
        let l = len as u128;
        if len == 0 {
            return 0;
        }
        match self {
            OperatorSpec::DilateUp(m) => l.saturating_mul(*m as u128),
            OperatorSpec::DilateDown(m) => l.div_ceil(*m as u128),
            OperatorSpec::Shift(n) => {
                if *n >= 0 {
                    l + *n as u128
                } else {
                    l.saturating_sub(n.unsigned_abs() as u128)
                }
            }
            OperatorSpec::Doubling | OperatorSpec::DoublingMinusLambda(_) => 2 * l + 1,
            OperatorSpec::DoublingInverse => l / 2,
            OperatorSpec::BlockEmbed => {
                if len >= 127 {
                    u128::MAX
                } else {
                    (1u128 << len) - 1
                }
            }
            OperatorSpec::AvgProject => {
                let k = block_of(len);
                (1u128 << k) - 1
            }
            OperatorSpec::AvgProjectN(n) => {
                let b = 1u128 << n;
                l.div_ceil(b) * b
            }
            OperatorSpec::ShiftMinusLambda(_) => l + 1,
            OperatorSpec::Compose(ops) => {
                let mut cur = l;
                for op in ops.iter().rev() {
                    if cur > usize::MAX as u128 {
                        return u128::MAX;
                    }
                    cur = op.output_len(cur as usize);
                }
                cur
            }
        }
    }
}

/// The dyadic block containing the 1-based index `i`: `2^{k-1} <= i < 2^k`.
pub(crate) fn block_of(i: usize) -> u32 {
    usize::BITS - i.leading_zeros()
}

fn block_means<S: Scalar>(x: &[S], starts: impl Iterator<Item = (usize, usize)>) -> Vec<S> {
    // (start, len) pairs over 0-based storage; entries past x are zero
    let mut out = Vec::new();
    for (start, len) in starts {
        if start >= x.len() {
            break;
        }
        let end = (start + len).min(x.len());
        let mut s = S::zero();
        for v in &x[start..end] {
            s = s + v.clone();
        }
        let mean = s / S::from_usize(len);
        out.extend(std::iter::repeat(mean).take(len));
    }
    out
}

/// Applies `op` to the coefficient slice `x` (`x[0]` is the first coordinate).
/// Trailing zeros are trimmed from the result.
pub fn apply_slice<S: Scalar>(op: &OperatorSpec<S>, x: &[S]) -> Vec<S> {
    let out = match op {
        OperatorSpec::DilateUp(m) => x
            .iter()
            .flat_map(|v| std::iter::repeat(v.clone()).take(*m))
            .collect(),
        OperatorSpec::DilateDown(m) => x
            .chunks(*m)
            .map(|c| {
                let mut s = S::zero();
                for v in c {
                    s = s + v.clone();
                }
                s / S::from_usize(*m)
            })
            .collect(),
        OperatorSpec::Shift(n) => {
            if *n >= 0 {
                let mut v = vec![S::zero(); *n as usize];
                v.extend_from_slice(x);
                v
            } else {
                let k = n.unsigned_abs() as usize;
                x.get(k..).map(|s| s.to_vec()).unwrap_or_default()
            }
        }
        OperatorSpec::Doubling => doubling(x),
        OperatorSpec::DoublingInverse => {
            // (D^{-1}x)_k = (x_{2k} + x_{2k+1}) / 2
            let two = S::from_usize(2);
            (1..=x.len() / 2)
                .map(|k| {
                    let a = x[2 * k - 1].clone();
                    let b = x.get(2 * k).cloned().unwrap_or_else(S::zero);
                    (a + b) / two.clone()
                })
                .collect()
        }
        OperatorSpec::BlockEmbed => {
            let mut v = Vec::new();
            for (k, a) in x.iter().enumerate() {
                v.extend(std::iter::repeat(a.clone()).take(1usize << k));
            }
            v
        }
        OperatorSpec::AvgProject => {
            let blocks = (0..).map(|k: u32| ((1usize << k) - 1, 1usize << k));
            block_means(x, blocks)
        }
        OperatorSpec::AvgProjectN(n) => {
            let b = 1usize << n;
            block_means(x, (0..).map(move |i| (i * b, b)))
        }
        OperatorSpec::ShiftMinusLambda(l) => {
            // (T_λ a)_k = a_{k-1} - λ a_k
            (0..=x.len())
                .map(|i| {
                    let prev = if i == 0 { S::zero() } else { x[i - 1].clone() };
                    let cur = x.get(i).cloned().unwrap_or_else(S::zero);
                    prev - l.clone() * cur
                })
                .collect()
        }
        OperatorSpec::DoublingMinusLambda(l) => {
            let mut d = doubling(x);
            for (i, v) in x.iter().enumerate() {
                d[i] = d[i].clone() - l.clone() * v.clone();
            }
            d
        }
        OperatorSpec::Compose(ops) => {
            let mut cur = x.to_vec();
            for o in ops.iter().rev() {
                cur = apply_slice(o, &cur);
            }
            cur
        }
    };
    trim(out)
}

fn doubling<S: Scalar>(x: &[S]) -> Vec<S> {
    if x.is_empty() {
        return Vec::new();
    }
    // (Dx)_1 = 0, (Dx)_k = x_{floor(k/2)}
    let n = 2 * x.len() + 1;
    (1..=n)
        .map(|k| if k < 2 { S::zero() } else { x[k / 2 - 1].clone() })
        .collect()
}

/// `op x` on a [`Seq`].
pub fn apply(op: &OperatorSpec, x: &Seq) -> Seq {
    Seq::from_finite(apply_slice(op, x.as_slice()))
}

impl fmt::Display for OperatorSpec<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSpec::DilateUp(m) => write!(f, "sigma_up:{m}"),
            OperatorSpec::DilateDown(m) => write!(f, "sigma_down:{m}"),
            OperatorSpec::Shift(n) => write!(f, "tau:{n}"),
            OperatorSpec::Doubling => write!(f, "doubling"),
            OperatorSpec::DoublingInverse => write!(f, "doubling_inv"),
            OperatorSpec::BlockEmbed => write!(f, "S"),
            OperatorSpec::AvgProject => write!(f, "Q"),
            OperatorSpec::AvgProjectN(n) => write!(f, "R:{n}"),
            OperatorSpec::ShiftMinusLambda(l) => write!(f, "T:{l}"),
            OperatorSpec::DoublingMinusLambda(l) => write!(f, "Dl:{l}"),
            OperatorSpec::Compose(ops) => {
                for (i, o) in ops.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{o}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for OperatorSpec<f64> {
    type Err = Error;

    /// Parses the CLI names (`sigma_up:m`, `tau:n`, `Dl:lambda`, ...); `*`
    /// composes, rightmost first.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('*') {
            let ops = s.split('*').map(str::parse).collect::<Result<Vec<_>>>()?;
            return Ok(OperatorSpec::Compose(ops));
        }
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let bad = || Error::Spec(format!("bad operator argument in '{s}'"));
        let int = |a: Option<&str>| -> Result<i64> { a.ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let real = |a: Option<&str>| -> Result<f64> { a.ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let op = match name {
            "sigma_up" => OperatorSpec::DilateUp(usize::try_from(int(arg)?).map_err(|_| bad())?),
            "sigma_down" => OperatorSpec::DilateDown(usize::try_from(int(arg)?).map_err(|_| bad())?),
            "tau" => OperatorSpec::Shift(int(arg)?),
            "doubling" => OperatorSpec::Doubling,
            "doubling_inv" => OperatorSpec::DoublingInverse,
            "S" => OperatorSpec::BlockEmbed,
            "Q" => OperatorSpec::AvgProject,
            "R" => OperatorSpec::AvgProjectN(u32::try_from(int(arg)?).map_err(|_| bad())?),
            "T" => OperatorSpec::ShiftMinusLambda(real(arg)?),
            "Dl" => OperatorSpec::DoublingMinusLambda(real(arg)?),
            _ => return Err(Error::Spec(format!("unknown operator '{name}'"))),
        };
        op.validate()?;
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn s(v: &[f64]) -> Seq {
        Seq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn coordinate_examples() {
        assert_eq!(apply(&OperatorSpec::DilateUp(2), &s(&[1.0, 2.0])), s(&[1.0, 1.0, 2.0, 2.0]));
        assert_eq!(apply(&OperatorSpec::Doubling, &Seq::unit(1)), s(&[0.0, 1.0, 1.0]));
        assert_eq!(apply(&OperatorSpec::DilateDown(2), &s(&[1.0, 3.0, 5.0, 7.0])), s(&[2.0, 6.0]));
        assert_eq!(apply(&OperatorSpec::AvgProject, &s(&[1.0, 2.0, 4.0])), s(&[1.0, 3.0, 3.0]));
        assert_eq!(apply(&OperatorSpec::BlockEmbed, &s(&[1.0, 2.0])), s(&[1.0, 2.0, 2.0]));
        assert_eq!(apply(&OperatorSpec::Shift(2), &s(&[1.0])), s(&[0.0, 0.0, 1.0]));
        assert_eq!(apply(&OperatorSpec::Shift(-1), &s(&[1.0, 2.0])), s(&[2.0]));
        assert_eq!(apply(&OperatorSpec::AvgProjectN(1), &s(&[1.0, 3.0, 5.0])), s(&[2.0, 2.0, 2.5, 2.5]));
        assert_eq!(
            apply(&OperatorSpec::ShiftMinusLambda(2.0), &s(&[1.0, 1.0])),
            s(&[-2.0, -1.0, 1.0])
        );
        assert_eq!(
            apply(&OperatorSpec::DoublingMinusLambda(0.5), &Seq::unit(1)),
            s(&[-0.5, 1.0, 1.0])
        );
    }

    #[test]
    fn doubling_inverse_undoes_doubling_exactly() {
        let x: Vec<BigRational> = (1..20).map(|k| ratio(k * k - 7, k + 3)).collect();
        let dx = apply_slice(&OperatorSpec::Doubling, &x);
        assert_eq!(apply_slice(&OperatorSpec::DoublingInverse, &dx), trim(x));
    }

    #[test]
    fn output_len_bounds_actual_output() {
        let ops: Vec<OperatorSpec> = vec![
            OperatorSpec::DilateUp(3),
            OperatorSpec::DilateDown(3),
            OperatorSpec::Shift(-2),
            OperatorSpec::Doubling,
            OperatorSpec::DoublingInverse,
            OperatorSpec::BlockEmbed,
            OperatorSpec::AvgProject,
            OperatorSpec::AvgProjectN(2),
            OperatorSpec::ShiftMinusLambda(1.5),
            OperatorSpec::Doubling.power(3),
        ];
        let x = vec![1.0; 9];
        for op in &ops {
            let got = apply_slice(op, &x).len() as u128;
            assert!(got <= op.output_len(x.len()), "{op}");
        }
    }

    #[test]
    fn parses_cli_names() {
        for name in ["sigma_up:3", "sigma_down:2", "tau:-4", "doubling", "doubling_inv", "S", "Q", "R:2", "T:1.5", "Dl:2"] {
            let op: OperatorSpec = name.parse().unwrap();
            assert_eq!(op.to_string(), name);
        }
        assert!("sigma_up:0".parse::<OperatorSpec>().is_err());
        assert!("T:-1".parse::<OperatorSpec>().is_err());
        assert!("warp".parse::<OperatorSpec>().is_err());
        let c: OperatorSpec = "doubling*doubling".parse().unwrap();
        assert_eq!(apply(&c, &Seq::unit(1)), s(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]));
    }
}
