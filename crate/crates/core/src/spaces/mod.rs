//! Concrete symmetric sequence spaces: `ℓ^p`, `ℓ^{p,q}`, Lorentz `λ_q(w)` and
//! Orlicz `l_N`, with their norms and fundamental functions.

mod orlicz;
mod weights;

pub use orlicz::{delta2_margin, OrliczFn, INVERSE_FLOOR};
pub use weights::{power_sum, WeightSeq, WeightSums, DIRECT_SUM_CAP};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::seq::{rearranged_abs, Seq};

/// Positions beyond this cannot be addressed exactly as `f64`.
const MAX_EXACT_POSITION: f64 = 9_007_199_254_740_992.0;

#[derive(Clone, Debug)]
pub enum SpaceSpec {
    /// `ℓ^p`, `1 <= p <= ∞`.
    Lp { p: f64 },
    /// `ℓ^{p,q}`, `1 < p < ∞`, `1 <= q <= ∞`, with the printed quasi-norm.
    LpQ { p: f64, q: f64 },
    /// `λ_q(w)`, `1 <= q < ∞`.
    Lorentz { q: f64, w: WeightSeq },
    Orlicz { n: OrliczFn },
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        let s = SpaceSpec::Lp { p };
        s.validate()?;
        Ok(s)
    }

    pub fn lpq(p: f64, q: f64) -> Result<Self> {
        let s = SpaceSpec::LpQ { p, q };
        s.validate()?;
        Ok(s)
    }

    pub fn lorentz(q: f64, w: WeightSeq) -> Result<Self> {
        let s = SpaceSpec::Lorentz { q, w };
        s.validate()?;
        Ok(s)
    }

    pub fn orlicz(n: OrliczFn) -> Self {
        SpaceSpec::Orlicz { n }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::Lp { p } => {
                if !(*p >= 1.0) {
                    return Err(Error::ParameterRange(format!("lp needs p in [1, inf], got {p}")));
                }
            }
            SpaceSpec::LpQ { p, q } => {
                if !(*p > 1.0 && p.is_finite()) {
                    return Err(Error::ParameterRange(format!("lpq needs p in (1, inf), got {p}")));
                }
                if !(*q >= 1.0) {
                    return Err(Error::ParameterRange(format!("lpq needs q in [1, inf], got {q}")));
                }
            }
            SpaceSpec::Lorentz { q, .. } => {
                if !(*q >= 1.0 && q.is_finite()) {
                    return Err(Error::ParameterRange(format!(
                        "lorentz needs q in [1, inf), got {q}"
                    )));
                }
            }
            SpaceSpec::Orlicz { .. } => {}
        }
        Ok(())
    }

    /// Short human-readable name used in reports.
    pub fn label(&self) -> String {
        match self {
            SpaceSpec::Lp { p } => format!("l^{p}"),
            SpaceSpec::LpQ { p, q } => format!("l^({p},{q})"),
            SpaceSpec::Lorentz { q, w } => format!("lambda_{q}({w:?})"),
            SpaceSpec::Orlicz { n } => format!("l_N[{n:?}]"),
        }
    }

    /// True for the `ℓ^{p,q}` quasi-norm regime `q > p` (no triangle inequality).
    pub fn is_quasi_normed(&self) -> bool {
        matches!(self, SpaceSpec::LpQ { p, q } if q > p)
    }
}

/// `w_k^q` profile shared by the Lorentz and `ℓ^{p,q}` norms.
enum Profile<'a> {
    Lorentz { q: f64, w: &'a WeightSeq },
    /// `k^{q/p - 1}`
    Lpq { p: f64, q: f64 },
}

impl Profile<'_> {
    fn q(&self) -> f64 {
        match self {
            Profile::Lorentz { q, .. } | Profile::Lpq { q, .. } => *q,
        }
    }

    fn term(&self, k: usize) -> Result<f64> {
        match self {
            Profile::Lorentz { q, w } => w.weight(k).map(|v| v.powf(*q)).ok_or(Error::DimensionCap {
                what: "weight array length",
                needed: k as u128,
                cap: w.array_len().unwrap_or(0) as u128,
            }),
            Profile::Lpq { p, q } => Ok((k as f64).powf(q / p - 1.0)),
        }
    }

    fn sums(&self, max_n: usize) -> Result<WeightSums> {
        match self {
            Profile::Lorentz { q, w } => WeightSums::new(w, *q, max_n),
            Profile::Lpq { p, q } => Ok(WeightSums::power(1.0 - q / p)),
        }
    }
}

fn profile(space: &SpaceSpec) -> Option<Profile<'_>> {
    match space {
        SpaceSpec::Lorentz { q, w } => Some(Profile::Lorentz { q: *q, w }),
        SpaceSpec::LpQ { p, q } if q.is_finite() => Some(Profile::Lpq { p: *p, q: *q }),
        _ => None,
    }
}

/// `‖x‖_X`. Orlicz norms are Luxemburg norms found by bisection.
pub fn norm(space: &SpaceSpec, x: &Seq) -> Result<f64> {
    norm_slice(space, x.as_slice())
}

pub(crate) fn norm_slice(space: &SpaceSpec, x: &[f64]) -> Result<f64> {
    space.validate()?;
    let r = rearranged_abs(x);
    let r: &[f64] = {
        let nz = r.iter().position(|v| *v == 0.0).unwrap_or(r.len());
        &r[..nz]
    };
    if r.is_empty() {
        return Ok(0.0);
    }
    let max = r[0];
    match space {
        SpaceSpec::Lp { p } => {
            if p.is_infinite() {
                Ok(max)
            } else {
                let s: f64 = r.iter().map(|v| (v / max).powf(*p)).sum();
                Ok(max * s.powf(1.0 / p))
            }
        }
        SpaceSpec::LpQ { p, q } if q.is_infinite() => Ok(r
            .iter()
            .enumerate()
            .map(|(i, v)| v * ((i + 1) as f64).powf(1.0 / p))
            .fold(0.0, f64::max)),
        SpaceSpec::LpQ { .. } | SpaceSpec::Lorentz { .. } => {
            let prof = profile(space).expect("weighted profile");
            let q = prof.q();
            let mut s = 0.0;
            for (i, v) in r.iter().enumerate() {
                s += (v / max).powf(q) * prof.term(i + 1)?;
            }
            Ok(max * s.powf(1.0 / q))
        }
        SpaceSpec::Orlicz { n } => {
            let terms: Vec<(f64, f64)> = r.iter().map(|v| (*v, 1.0)).collect();
            Ok(orlicz::luxemburg(n, &terms))
        }
    }
}

/// Norm of a vector made of constant runs: `runs[i] = (value, multiplicity)`.
///
/// Multiplicities may be astronomically large for `ℓ^p` (the sum is taken in
/// log space); the weighted variants need exact positions below `2^53`.
pub fn norm_runs(space: &SpaceSpec, runs: &[(f64, f64)]) -> Result<f64> {
    space.validate()?;
    let mut runs: Vec<(f64, f64)> = runs
        .iter()
        .map(|(v, c)| (v.abs(), *c))
        .filter(|(v, c)| *v != 0.0 && *c > 0.0)
        .collect();
    if runs.is_empty() {
        return Ok(0.0);
    }
    runs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    let max = runs[0].0;
    match space {
        SpaceSpec::Lp { p } if p.is_infinite() => Ok(max),
        SpaceSpec::Lp { p } => {
            let logs: Vec<f64> = runs.iter().map(|(v, c)| c.ln() + p * (v / max).ln()).collect();
            let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let s: f64 = logs.iter().map(|l| (l - m).exp()).sum();
            Ok(max * ((m + s.ln()) / p).exp())
        }
        SpaceSpec::LpQ { p, q } if q.is_infinite() => {
            let mut pos = 0.0;
            let mut best = 0.0f64;
            for (v, c) in &runs {
                pos += c;
                best = best.max(v * pos.powf(1.0 / p));
            }
            Ok(best)
        }
        SpaceSpec::LpQ { .. } | SpaceSpec::Lorentz { .. } => {
            let total: f64 = runs.iter().map(|(_, c)| c).sum();
            if !(total <= MAX_EXACT_POSITION) {
                return Err(Error::DimensionCap {
                    what: "run positions",
                    needed: total.min(1e38) as u128,
                    cap: MAX_EXACT_POSITION as u128,
                });
            }
            let prof = profile(space).expect("weighted profile");
            let q = prof.q();
            let sums = prof.sums(total as usize)?;
            let mut pos = 0.0;
            let mut s = 0.0;
            for (v, c) in &runs {
                let w = sums.get(pos + c) - sums.get(pos);
                s += (v / max).powf(q) * w;
                pos += c;
            }
            Ok(max * s.powf(1.0 / q))
        }
        SpaceSpec::Orlicz { n } => {
            if runs.iter().any(|(_, c)| !c.is_finite()) {
                return Err(Error::DimensionCap {
                    what: "Orlicz run multiplicity",
                    needed: u128::MAX,
                    cap: f64::MAX as u128,
                });
            }
            Ok(orlicz::luxemburg(n, &runs))
        }
    }
}

/// `‖Σ_k a_k χ_{[2^{k-1}, 2^k - 1]}‖_X`: the norm of `a` spread over dyadic
/// blocks. `ℓ^p` works for any number of blocks; the other variants expand
/// block sizes as ordinary multiplicities and are bounded by those limits.
pub fn norm_dyadic_blocks(space: &SpaceSpec, a: &[f64]) -> Result<f64> {
    space.validate()?;
    if let SpaceSpec::Lp { p } = space {
        if p.is_finite() {
            let max = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if max == 0.0 {
                return Ok(0.0);
            }
            let logs: Vec<f64> = a
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(k, v)| k as f64 * std::f64::consts::LN_2 + p * (v.abs() / max).ln())
                .collect();
            let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let s: f64 = logs.iter().map(|l| (l - m).exp()).sum();
            return Ok(max * ((m + s.ln()) / p).exp());
        }
    }
    let runs: Vec<(f64, f64)> = a
        .iter()
        .enumerate()
        .map(|(k, v)| (*v, 2f64.powi(k as i32)))
        .collect();
    norm_runs(space, &runs)
}

/// `φ_X(n) = ‖χ_{1..n}‖_X` from closed forms.
pub fn fundamental_function(space: &SpaceSpec, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ParameterRange("fundamental function needs n >= 1".into()));
    }
    fundamental_function_f(space, n as f64)
}

/// Same as [`fundamental_function`] for integer-valued `n` beyond `usize`.
pub fn fundamental_function_f(space: &SpaceSpec, n: f64) -> Result<f64> {
    space.validate()?;
    let n = n.floor();
    if n < 1.0 {
        return Err(Error::ParameterRange("fundamental function needs n >= 1".into()));
    }
    match space {
        SpaceSpec::Lp { p } => Ok(if p.is_infinite() { 1.0 } else { n.powf(1.0 / p) }),
        SpaceSpec::LpQ { p, q } => {
            if q.is_infinite() {
                Ok(n.powf(1.0 / p))
            } else {
                Ok(power_sum(1.0 - q / p, n).powf(1.0 / q))
            }
        }
        SpaceSpec::Lorentz { q, w } => {
            if let Some(len) = w.array_len() {
                if n > len as f64 {
                    return Err(Error::DimensionCap {
                        what: "weight array length",
                        needed: n as u128,
                        cap: len as u128,
                    });
                }
            }
            let sums = match w {
                WeightSeq::Power { theta } => WeightSums::power(q * theta),
                _ => WeightSums::new(w, *q, n as usize)?,
            };
            Ok(sums.get(n).powf(1.0 / q))
        }
        SpaceSpec::Orlicz { n: nf } => Ok(1.0 / nf.inverse(1.0 / n)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Seq {
        Seq::new(v.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn norm_examples() {
        assert!(close(norm(&SpaceSpec::lp(2.0).unwrap(), &s(&[3.0, 4.0])).unwrap(), 5.0, 1e-15));
        let lor = SpaceSpec::lorentz(
            1.0,
            WeightSeq::array(vec![1.0, 0.5, 0.25, 0.125]).unwrap(),
        )
        .unwrap();
        assert!(close(norm(&lor, &s(&[1.0, 1.0, 1.0])).unwrap(), 1.75, 1e-15));
        let cube = SpaceSpec::orlicz(OrliczFn::power(3.0).unwrap());
        assert!(close(norm(&cube, &s(&[1.0, 1.0])).unwrap(), 2f64.powf(1.0 / 3.0), 1e-13));
        let weak = SpaceSpec::lpq(2.0, f64::INFINITY).unwrap();
        assert!(close(norm(&weak, &s(&[1.0, 1.0, 1.0, 1.0])).unwrap(), 2.0, 1e-15));
        let sup = SpaceSpec::lp(f64::INFINITY).unwrap();
        assert_eq!(norm(&sup, &s(&[1.0, -4.0, 2.0])).unwrap(), 4.0);
    }

    #[test]
    fn parameter_ranges() {
        assert!(SpaceSpec::lp(0.5).is_err());
        assert!(SpaceSpec::lpq(1.0, 2.0).is_err());
        assert!(SpaceSpec::lpq(2.0, 0.5).is_err());
        assert!(SpaceSpec::lorentz(f64::INFINITY, WeightSeq::constant()).is_err());
        assert!(SpaceSpec::lp(f64::NAN).is_err());
    }

    #[test]
    fn fundamental_function_examples() {
        assert!(close(fundamental_function(&SpaceSpec::lp(3.0).unwrap(), 8).unwrap(), 2.0, 1e-15));
        let lor = SpaceSpec::lorentz(2.0, WeightSeq::power(0.25).unwrap()).unwrap();
        let expect: f64 = (1..=4).map(|k| (k as f64).powf(-0.5)).sum::<f64>().sqrt();
        assert!(close(fundamental_function(&lor, 4).unwrap(), expect, 1e-15));
        let n = OrliczFn::power_log(2.0, 0.5).unwrap();
        let orl = SpaceSpec::orlicz(n.clone());
        let expect = 1.0 / n.inverse(1.0 / 16.0).unwrap();
        assert_eq!(fundamental_function(&orl, 16).unwrap(), expect);
        assert_eq!(fundamental_function(&SpaceSpec::lp(f64::INFINITY).unwrap(), 99).unwrap(), 1.0);
    }

    #[test]
    fn fundamental_function_shape() {
        let spaces = [
            SpaceSpec::lp(1.5).unwrap(),
            SpaceSpec::lpq(3.0, 1.5).unwrap(),
            SpaceSpec::lorentz(2.0, WeightSeq::power(0.3).unwrap()).unwrap(),
            SpaceSpec::orlicz(OrliczFn::power_log(3.0, 1.0).unwrap()),
        ];
        for sp in &spaces {
            let mut prev = 0.0;
            let mut prev_ratio = f64::INFINITY;
            for e in 0..=16 {
                for n in [(1usize << e), (1usize << e) + 1] {
                    let phi = fundamental_function(sp, n).unwrap();
                    assert!(phi >= prev * (1.0 - 1e-12), "{} not nondecreasing at {n}", sp.label());
                    let ratio = phi / n as f64;
                    assert!(ratio <= prev_ratio * (1.0 + 1e-12), "{} phi/n grows at {n}", sp.label());
                    prev = phi;
                    prev_ratio = ratio;
                }
            }
        }
    }

    #[test]
    fn fundamental_function_is_indicator_norm() {
        let spaces = [
            SpaceSpec::lp(2.5).unwrap(),
            SpaceSpec::lpq(2.0, 4.0).unwrap(),
            SpaceSpec::lorentz(1.0, WeightSeq::power(0.5).unwrap()).unwrap(),
            SpaceSpec::orlicz(OrliczFn::power_log(2.0, 0.5).unwrap()),
        ];
        for sp in &spaces {
            for n in [1usize, 2, 5, 64, 1000] {
                let a = fundamental_function(sp, n).unwrap();
                let b = norm(sp, &Seq::indicator(n)).unwrap();
                assert!(close(a, b, 1e-11), "{}: {a} vs {b}", sp.label());
            }
        }
    }

    #[test]
    fn runs_match_dense() {
        let spaces = [
            SpaceSpec::lp(1.0).unwrap(),
            SpaceSpec::lp(3.0).unwrap(),
            SpaceSpec::lp(f64::INFINITY).unwrap(),
            SpaceSpec::lpq(2.0, 1.0).unwrap(),
            SpaceSpec::lpq(2.0, f64::INFINITY).unwrap(),
            SpaceSpec::lorentz(2.0, WeightSeq::power(0.25).unwrap()).unwrap(),
            SpaceSpec::orlicz(OrliczFn::power_log(2.0, 0.5).unwrap()),
        ];
        let runs = [(0.5, 3.0), (-2.0, 1.0), (1.25, 4.0), (0.0, 2.0), (0.75, 8.0)];
        let mut dense = Vec::new();
        for (v, c) in runs {
            dense.extend(std::iter::repeat(v).take(c as usize));
        }
        for sp in &spaces {
            let a = norm_runs(sp, &runs).unwrap();
            let b = norm_slice(sp, &dense).unwrap();
            assert!(close(a, b, 1e-12), "{}: {a} vs {b}", sp.label());
        }
    }

    #[test]
    fn array_weights_limited_to_their_length() {
        let lor = SpaceSpec::lorentz(1.0, WeightSeq::array(vec![1.0, 0.5]).unwrap()).unwrap();
        assert!(close(norm(&lor, &s(&[2.0, 4.0])).unwrap(), 5.0, 1e-15));
        assert!(norm(&lor, &s(&[1.0, 1.0, 1.0])).is_err());
        assert!(fundamental_function(&lor, 3).is_err());
    }
}
