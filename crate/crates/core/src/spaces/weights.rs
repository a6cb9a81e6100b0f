use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest prefix a non-closed-form weight sum will walk term by term.
pub const DIRECT_SUM_CAP: usize = 1 << 26;

type WeightFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A nonincreasing sequence of positive weights `w_1 >= w_2 >= ... > 0`.
#[derive(Clone)]
pub enum WeightSeq {
    /// `w_k = k^(-theta)`.
    Power { theta: f64 },
    /// Explicit finite prefix. Only good for norms of vectors that fit inside it.
    Array(Arc<[f64]>),
    /// Arbitrary closed-form rule.
    Generator { name: String, rule: WeightFn },
}

impl fmt::Debug for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSeq::Power { theta } => write!(f, "Power {{ theta: {theta} }}"),
            WeightSeq::Array(v) => write!(f, "Array(len {})", v.len()),
            WeightSeq::Generator { name, .. } => write!(f, "Generator({name})"),
        }
    }
}

impl WeightSeq {
    pub fn power(theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::InvalidWeights(format!(
                "power weights need theta >= 0, got {theta}"
            )));
        }
        Ok(WeightSeq::Power { theta })
    }

    pub fn constant() -> Self {
        WeightSeq::Power { theta: 0.0 }
    }

    pub fn array(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeights("empty weight array".into()));
        }
        for (i, w) in values.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeights(format!("w_{} = {w} is not positive", i + 1)));
            }
        }
        if let Some(i) = values.windows(2).position(|p| p[1] > p[0]) {
            return Err(Error::InvalidWeights(format!("w_{} < w_{}", i + 1, i + 2)));
        }
        Ok(WeightSeq::Array(values.into()))
    }

    /// Wraps a rule and spot-checks positivity and monotonicity for `k <= 2^20`.
    pub fn generator<F>(name: impl Into<String>, rule: F) -> Result<Self>
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        let w = WeightSeq::Generator {
            name: name.into(),
            rule: Arc::new(rule),
        };
        w.spot_check()?;
        Ok(w)
    }

    fn spot_check(&self) -> Result<()> {
        let mut probes: Vec<usize> = (1..=4096).collect();
        for e in 12..=20 {
            let k = 1usize << e;
            probes.extend([k - 1, k, k + 1]);
        }
        probes.sort_unstable();
        probes.dedup();
        let mut prev = f64::INFINITY;
        for k in probes {
            let w = self.weight(k).unwrap_or(f64::NAN);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeights(format!("w_{k} = {w} is not positive")));
            }
            if w > prev * (1.0 + 1e-14) {
                return Err(Error::InvalidWeights(format!("weights increase at k = {k}")));
            }
            prev = w;
        }
        Ok(())
    }

    /// `w_k` (1-based); `None` past the end of an array.
    pub fn weight(&self, k: usize) -> Option<f64> {
        match self {
            WeightSeq::Power { theta } => Some((k as f64).powf(-theta)),
            WeightSeq::Array(v) => v.get(k.wrapping_sub(1)).copied(),
            WeightSeq::Generator { rule, .. } => Some(rule(k)),
        }
    }

    pub fn is_array(&self) -> bool {
        matches!(self, WeightSeq::Array(_))
    }

    pub fn array_len(&self) -> Option<usize> {
        match self {
            WeightSeq::Array(v) => Some(v.len()),
            _ => None,
        }
    }

    /// Index formulas take sups over all `m`; a truncated array would bias them.
    pub fn require_generator(&self) -> Result<()> {
        if self.is_array() {
            return Err(Error::Unsupported(
                "index estimation needs a generator-backed weight sequence".into(),
            ));
        }
        Ok(())
    }

    /// `sum_{k <= n} w_k^q`.
    pub fn pow_partial_sum(&self, q: f64, n: usize) -> Result<f64> {
        match self {
            WeightSeq::Power { theta } => Ok(power_sum(q * theta, n as f64)),
            WeightSeq::Array(v) => {
                if n > v.len() {
                    return Err(Error::DimensionCap {
                        what: "weight array prefix",
                        needed: n as u128,
                        cap: v.len() as u128,
                    });
                }
                Ok(v[..n].iter().map(|w| w.powf(q)).sum())
            }
            WeightSeq::Generator { rule, .. } => {
                if n > DIRECT_SUM_CAP {
                    return Err(Error::DimensionCap {
                        what: "direct weight summation",
                        needed: n as u128,
                        cap: DIRECT_SUM_CAP as u128,
                    });
                }
                Ok((1..=n).map(|k| rule(k).powf(q)).sum())
            }
        }
    }
}

/// Partial sums `W(n) = sum_{k<=n} w_k^q`, closed form for power weights and a
/// cached prefix table otherwise.
#[derive(Debug, Clone)]
pub struct WeightSums {
    exponent: Option<f64>,
    prefix: Vec<f64>,
}

impl WeightSums {
    /// Sums of `k^(-s)`.
    pub fn power(s: f64) -> Self {
        WeightSums {
            exponent: Some(s),
            prefix: Vec::new(),
        }
    }

    /// Prepares `W(n)` for every `n <= max_n`.
    pub fn new(w: &WeightSeq, q: f64, max_n: usize) -> Result<Self> {
        match w {
            WeightSeq::Power { theta } => Ok(Self::power(q * theta)),
            _ => {
                let cap = w.array_len().unwrap_or(DIRECT_SUM_CAP);
                if max_n > cap {
                    return Err(Error::DimensionCap {
                        what: "weight prefix sums",
                        needed: max_n as u128,
                        cap: cap as u128,
                    });
                }
                let mut prefix = Vec::with_capacity(max_n + 1);
                prefix.push(0.0);
                let mut acc = 0.0;
                for k in 1..=max_n {
                    acc += w.weight(k).unwrap_or(0.0).powf(q);
                    prefix.push(acc);
                }
                Ok(WeightSums {
                    exponent: None,
                    prefix,
                })
            }
        }
    }

    /// `W(n)`; `n` may be fractional-free but larger than `usize` for the closed form.
    pub fn get(&self, n: f64) -> f64 {
        match self.exponent {
            Some(s) => power_sum(s, n),
            None => self.prefix[n as usize],
        }
    }

    pub fn max_n(&self) -> f64 {
        match self.exponent {
            Some(_) => f64::INFINITY,
            None => (self.prefix.len() - 1) as f64,
        }
    }
}

/// `sum_{k=1}^{n} k^(-s)` for real `s`, exact summation for small `n` and an
/// Euler–Maclaurin tail beyond.
pub fn power_sum(s: f64, n: f64) -> f64 {
    let n = n.floor();
    if n < 1.0 {
        return 0.0;
    }
    if s == 0.0 {
        return n;
    }
    const DIRECT: f64 = 4096.0;
    if n <= DIRECT {
        return (1..=n as usize).map(|k| (k as f64).powf(-s)).sum();
    }
    const K: usize = 64;
    let head: f64 = (1..K).map(|k| (k as f64).powf(-s)).sum();
    let k = K as f64;
    let f = |x: f64| x.powf(-s);
    let integral = if (1.0 - s).abs() < 1e-12 {
        (n / k).ln()
    } else {
        let e = 1.0 - s;
        k.powf(e) * (e * (n / k).ln()).exp_m1() / e
    };
    // odd derivatives of x^(-s)
    let d1 = |x: f64| -s * x.powf(-s - 1.0);
    let d3 = |x: f64| -s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0);
    let d5 = |x: f64| -s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * x.powf(-s - 5.0);
    let tail = integral + 0.5 * (f(k) + f(n)) + (d1(n) - d1(k)) / 12.0 - (d3(n) - d3(k)) / 720.0
        + (d5(n) - d5(k)) / 30240.0;
    head + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(s: f64, n: usize) -> f64 {
        // pairwise-ish: sum small terms first
        (1..=n).rev().map(|k| (k as f64).powf(-s)).sum()
    }

    #[test]
    fn power_sum_matches_direct_summation() {
        for &s in &[-0.5, 0.0, 0.3, 0.5, 0.8, 1.0, 1.7] {
            for &n in &[1usize, 7, 4096, 4097, 10_000, 123_457, 1 << 20] {
                let a = power_sum(s, n as f64);
                let b = direct(s, n);
                assert!((a - b).abs() <= 1e-11 * b.abs(), "s={s} n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn validation() {
        assert!(WeightSeq::power(-0.1).is_err());
        assert!(WeightSeq::array(vec![1.0, 2.0]).is_err());
        assert!(WeightSeq::array(vec![1.0, 0.0]).is_err());
        assert!(WeightSeq::generator("increasing", |k| k as f64).is_err());
        assert!(WeightSeq::generator("harmonic", |k| 1.0 / k as f64).is_ok());
    }

    #[test]
    fn sums_agree_across_backends() {
        let p = WeightSeq::power(0.25).unwrap();
        let g = WeightSeq::generator("k^-1/4", |k| (k as f64).powf(-0.25)).unwrap();
        let ps = WeightSums::new(&p, 2.0, 5000).unwrap();
        let gs = WeightSums::new(&g, 2.0, 5000).unwrap();
        for n in [1.0, 10.0, 4999.0, 5000.0] {
            assert!((ps.get(n) - gs.get(n)).abs() < 1e-10 * gs.get(n));
        }
    }
}
