//! Finite-dimensional lower bounds for operator norms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{apply_slice, OperatorSpec};
use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::spaces::{norm_slice, SpaceSpec, WeightSeq, WeightSums};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Indicators, geometric and power profiles, block indicators.
    Structured,
    /// Gaussian vectors and their decreasing rearrangements.
    Random,
    /// Structured candidates plus coordinate ascent on the decreasing cone.
    Optimize,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structured" => Ok(Strategy::Structured),
            "random" => Ok(Strategy::Random),
            "optimize" => Ok(Strategy::Optimize),
            _ => Err(Error::Spec(format!("unknown strategy '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub restarts: usize,
    pub iterations: usize,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 16,
            iterations: 500,
            random_samples: 64,
            seed: 0x5eed,
        }
    }
}

/// Result of a norm search. `value` is always a lower bound on the true norm,
/// attained at `argmax`.
#[derive(Clone, Debug, Serialize)]
pub struct NormCertificate {
    pub value: f64,
    pub argmax: Seq,
    pub strategy: Strategy,
    pub dim: usize,
    /// Inputs were restricted to this length so the output fits in `dim`.
    pub input_len: usize,
    pub truncated: bool,
    pub evaluations: usize,
}

/// Largest input length whose image is guaranteed to fit in `dim` coordinates.
pub(crate) fn max_input_len<S: crate::scalar::Scalar>(op: &OperatorSpec<S>, dim: usize) -> usize {
    let (mut lo, mut hi) = (1usize, dim.max(1));
    if op.output_len(hi) <= dim as u128 {
        return hi;
    }
    if op.output_len(1) > dim as u128 {
        return 1;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if op.output_len(mid) <= dim as u128 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

struct Evaluator<'a> {
    space: &'a SpaceSpec,
    op: &'a OperatorSpec,
}

impl Evaluator<'_> {
    fn ratio(&self, x: &[f64]) -> Result<f64> {
        let nx = norm_slice(self.space, x)?;
        if nx == 0.0 {
            return Ok(0.0);
        }
        let y = apply_slice(self.op, x);
        Ok(norm_slice(self.space, &y)? / nx)
    }
}

#[derive(Clone)]
struct Best {
    value: f64,
    x: Vec<f64>,
    evals: usize,
}

impl Best {
    fn empty() -> Self {
        Best { value: 0.0, x: Vec::new(), evals: 0 }
    }

    fn offer(&mut self, value: f64, x: &[f64]) {
        self.evals += 1;
        if value > self.value {
            self.value = value;
            self.x = x.to_vec();
        }
    }

    fn merge(mut self, other: Best) -> Best {
        let evals = self.evals + other.evals;
        if other.value > self.value {
            self = other;
        }
        self.evals = evals;
        self
    }
}

fn geometric_grid(len: usize) -> Vec<usize> {
    let mut g = vec![];
    let mut j = 1usize;
    while j <= len {
        g.push(j);
        let next = (j as f64 * 1.5).ceil() as usize;
        j = next.max(j + 1);
    }
    if g.last() != Some(&len) {
        g.push(len);
    }
    g
}

fn structured_candidates(len: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for j in geometric_grid(len) {
        out.push(vec![1.0; j]);
    }
    for r in [0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999] {
        out.push((0..len).map(|k| f64::powi(r, k as i32)).collect());
    }
    for theta in [0.1, 0.25, 0.5, 0.75, 1.0, 1.5] {
        out.push((1..=len).map(|k| (k as f64).powf(-theta)).collect());
    }
    // intervals [2^s, 2^s t - 1]: images of initial indicators under doubling
    let mut s = 0u32;
    while (1usize << s) <= len {
        let b = 1usize << s;
        let t_max = (len + 1) / b;
        for t in [2usize, 3, t_max] {
            if t >= 2 && b * t - 1 <= len {
                let mut v = vec![0.0; b * t - 1];
                v[b - 1..].iter_mut().for_each(|c| *c = 1.0);
                out.push(v);
            }
        }
        s += 1;
    }
    out
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn decreasing_from_increments(knots: &[usize], d: &[f64], len: usize) -> Vec<f64> {
    // x_k = sum of d_i over knots i with knots[i] >= k
    let mut x = vec![0.0; len];
    let mut acc = 0.0;
    let mut ki = knots.len();
    for k in (1..=len).rev() {
        while ki > 0 && knots[ki - 1] >= k {
            ki -= 1;
            acc += d[ki];
        }
        x[k - 1] = acc;
    }
    x
}

fn knot_positions(len: usize) -> Vec<usize> {
    let mut k: Vec<usize> = (0..48)
        .map(|i| (len as f64).powf(i as f64 / 47.0).round() as usize)
        .map(|v| v.clamp(1, len))
        .collect();
    k.dedup();
    k
}

/// Coordinate search over the decreasing nonnegative cone. With `minimize`
/// the ratio is driven down instead of up; `Best.value` then holds `-ratio`.
fn cone_walk(ev: &Evaluator, len: usize, iterations: usize, seed: u64, minimize: bool) -> Result<Best> {
    let sense = if minimize { -1.0 } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let knots = knot_positions(len);
    let mut d: Vec<f64> = knots.iter().map(|_| rng.gen::<f64>()).collect();
    let mut best = Best::empty();
    best.value = f64::NEG_INFINITY;
    let x = decreasing_from_increments(&knots, &d, len);
    let mut cur = sense * ev.ratio(&x)?;
    best.offer(cur, &x);
    let mut step = 1.0;
    let mut it = 0;
    while it < iterations && step > 1e-4 {
        let mut improved = false;
        for i in 0..knots.len() {
            if it >= iterations {
                break;
            }
            let mean = d.iter().sum::<f64>() / d.len() as f64;
            for cand in [d[i] * (1.0 + step) + step * mean, (d[i] * (1.0 - step)).max(0.0)] {
                it += 1;
                let old = d[i];
                d[i] = cand;
                if d.iter().all(|v| *v == 0.0) {
                    d[i] = old;
                    continue;
                }
                let x = decreasing_from_increments(&knots, &d, len);
                let v = sense * ev.ratio(&x)?;
                best.offer(v, &x);
                if v > cur {
                    cur = v;
                    improved = true;
                    break;
                }
                d[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(best)
}

/// Multi-start minimization of `‖op x‖ / ‖x‖` over decreasing nonnegative `x`
/// of length `len`. Returns the smallest ratio found and its vector.
pub(crate) fn cone_minimize(
    space: &SpaceSpec,
    op: &OperatorSpec,
    len: usize,
    cfg: &SearchConfig,
) -> Result<(f64, Vec<f64>)> {
    let ev = Evaluator { space, op };
    let found = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| cone_walk(&ev, len, cfg.iterations, cfg.seed.wrapping_add(r as u64), true))
        .collect::<Result<Vec<_>>>()?;
    let best = found.into_iter().reduce(Best::merge).expect("at least one restart");
    Ok((-best.value, best.x))
}

/// Searches unit vectors of length at most `dim` for a large `‖op x‖ / ‖x‖`.
///
/// Inputs are shortened when needed so that `op x` has at most `dim`
/// coordinates; `truncated` records that the search saw only part of the space.
pub fn operator_norm_lower(
    space: &SpaceSpec,
    op: &OperatorSpec,
    dim: usize,
    strategy: Strategy,
    cfg: &SearchConfig,
) -> Result<NormCertificate> {
    if dim == 0 {
        return Err(Error::ParameterRange("dim must be >= 1".into()));
    }
    space.validate()?;
    op.validate()?;
    let len = max_input_len(op, dim);
    let ev = Evaluator { space, op };
    let mut best = Best::empty();
    if strategy != Strategy::Random {
        for x in structured_candidates(len) {
            best.offer(ev.ratio(&x)?, &x);
        }
    }
    if strategy == Strategy::Random {
        let per = cfg.random_samples.max(1);
        let found = (0..cfg.restarts.max(1))
            .into_par_iter()
            .map(|r| -> Result<Best> {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                let mut b = Best::empty();
                for _ in 0..per.div_ceil(cfg.restarts.max(1)) {
                    let mut x = random_vector(&mut rng, len);
                    b.offer(ev.ratio(&x)?, &x);
                    x.iter_mut().for_each(|v| *v = v.abs());
                    x.sort_by(|a, b| b.total_cmp(a));
                    b.offer(ev.ratio(&x)?, &x);
                }
                Ok(b)
            })
            .collect::<Result<Vec<_>>>()?;
        best = found.into_iter().fold(best, Best::merge);
    }
    if strategy == Strategy::Optimize {
        let found = (0..cfg.restarts.max(1))
            .into_par_iter()
            .map(|r| cone_walk(&ev, len, cfg.iterations, cfg.seed.wrapping_add(r as u64), false))
            .collect::<Result<Vec<_>>>()?;
        best = found.into_iter().fold(best, Best::merge);
    }
    Ok(NormCertificate {
        value: best.value,
        argmax: Seq::from_finite(best.x),
        strategy,
        dim,
        input_len: len,
        truncated: len < dim,
        evaluations: best.evals,
    })
}

/// `sup_{j <= j_max} (W(2^n j) / W(j))^{1/q}` with `W(m) = sum_{i<=m} w_i^q`.
///
/// Over all `j` this is exactly `‖σ_{2^n}‖` on the Lorentz space; a finite
/// `j_max` gives a lower bound.
pub fn lorentz_dilation_norm(q: f64, w: &WeightSeq, n: u32, j_max: usize) -> Result<f64> {
    if n < 1 || j_max < 1 || n > 60 {
        return Err(Error::ParameterRange(format!("need n in 1..=60 and j_max >= 1 (n={n}, j_max={j_max})")));
    }
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::ParameterRange(format!("q must be in [1, inf), got {q}")));
    }
    let top = (j_max as u128) << n;
    if top > usize::MAX as u128 && !matches!(w, WeightSeq::Power { .. }) {
        return Err(Error::DimensionCap { what: "dilated prefix", needed: top, cap: usize::MAX as u128 });
    }
    let sums = match w {
        WeightSeq::Power { .. } => WeightSums::new(w, q, 0)?,
        _ => WeightSums::new(w, q, top as usize)?,
    };
    let m = 2f64.powi(n as i32);
    let sup = (1..=j_max)
        .map(|j| sums.get(m * j as f64) / sums.get(j as f64))
        .fold(0.0, f64::max);
    Ok(sup.powf(1.0 / q))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralRadiusReport {
    /// `min_n L(n)^{1/n}`, where `L(n)` is the searched lower bound for `‖op^n‖`.
    pub estimate: f64,
    pub at_n_max: f64,
    pub per_n: Vec<f64>,
    pub caveat: &'static str,
}

/// Estimates `r(op) = inf_n ‖op^n‖^{1/n}` from lower bounds for `‖op^n‖`.
pub fn spectral_radius_estimate(
    space: &SpaceSpec,
    op: &OperatorSpec,
    n_max: u32,
    dim: usize,
    cfg: &SearchConfig,
) -> Result<SpectralRadiusReport> {
    if n_max < 1 {
        return Err(Error::ParameterRange("n_max must be >= 1".into()));
    }
    let per_n = (1..=n_max)
        .map(|n| {
            let c = operator_norm_lower(space, &op.power(n), dim, Strategy::Structured, cfg)?;
            Ok(c.value.powf(1.0 / n as f64))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SpectralRadiusReport {
        estimate: per_n.iter().copied().fold(f64::INFINITY, f64::min),
        at_n_max: *per_n.last().expect("n_max >= 1"),
        per_n,
        caveat: "each term is a searched lower bound for the power norm; the minimum over n bounds the limit only if the search is sharp",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchConfig {
        SearchConfig { restarts: 4, iterations: 120, random_samples: 16, seed: 7 }
    }

    #[test]
    fn lp_norm_bounds() {
        for p in [1.0, 1.5, 2.0, 4.0] {
            let sp = SpaceSpec::lp(p).unwrap();
            for strat in [Strategy::Structured, Strategy::Random, Strategy::Optimize] {
                let down = operator_norm_lower(&sp, &OperatorSpec::DilateDown(3), 64, strat, &quick()).unwrap();
                assert!(down.value <= 1.0 + 1e-12);
                let up = operator_norm_lower(&sp, &OperatorSpec::DilateUp(3), 64, strat, &quick()).unwrap();
                assert!(up.value <= 3.0 + 1e-12);
                let d = operator_norm_lower(&sp, &OperatorSpec::Doubling, 64, strat, &quick()).unwrap();
                assert!((d.value - 2f64.powf(1.0 / p)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn input_restricted_to_fit() {
        let sp = SpaceSpec::lp(2.0).unwrap();
        let c = operator_norm_lower(&sp, &OperatorSpec::Doubling, 16, Strategy::Structured, &quick()).unwrap();
        assert_eq!(c.input_len, 7);
        assert!(c.truncated);
        assert!(c.argmax.len() <= 7);
    }

    #[test]
    fn dilation_norm_constant_weights() {
        let v = lorentz_dilation_norm(1.0, &WeightSeq::constant(), 1, 100).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_radius_examples() {
        let cfg = quick();
        for p in [1.0, 2.0, 3.0] {
            let sp = SpaceSpec::lp(p).unwrap();
            let s = spectral_radius_estimate(&sp, &OperatorSpec::Shift(1), 6, 256, &cfg).unwrap();
            assert!((s.estimate - 1.0).abs() < 1e-9);
            let d = spectral_radius_estimate(&sp, &OperatorSpec::Doubling, 10, 1 << 12, &cfg).unwrap();
            assert!((d.estimate - 2f64.powf(1.0 / p)).abs() < 1e-3);
            let di = spectral_radius_estimate(&sp, &OperatorSpec::DoublingInverse, 10, 1 << 12, &cfg).unwrap();
            assert!((di.estimate - 2f64.powf(-1.0 / p)).abs() < 1e-3, "{p}: {:?}", di.per_n);
        }
    }
}
