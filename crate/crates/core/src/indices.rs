//! Boyd indices, fundamental indices and the interval `[1/β, 1/α]` of exponents
//! `p` for which `ℓ^p` is symmetrically finitely represented.
//!
//! Each index is a limit `lim_n (1/n) log2 G_n` of a log-subadditive (or
//! superadditive) sequence. The sups are truncated, and the convergence in `n`
//! is slow (`O(1/n)` for power weights), so the point estimate uses geometric
//! extrapolation of `G_n` and the raw `(1/n) log2 G_n` values are kept as the
//! one-sided bound.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattices::{dyadic_decay_condition, dyadic_weight_drop, log2_weight_at_pow2};
use crate::spaces::{OrliczFn, SpaceSpec, WeightSeq, DIRECT_SUM_CAP, INVERSE_FLOOR};
use crate::spaces::power_sum;

/// Which side of the limit the raw values `(1/n) log2 G_n` lie on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Log-subadditive: every raw value bounds the limit from above.
    Upper,
    /// Log-superadditive: every raw value bounds the limit from below.
    Lower,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate {
    /// Extrapolated limit.
    pub point: f64,
    /// Best raw value on the certified side (min or max over `n`).
    pub certified: f64,
    /// `log2(G_n / G_{n-1})` at `n = n_max`.
    pub increment: f64,
    /// `(1/n) log2 G_n` at `n = n_max`.
    pub at_n_max: f64,
    pub method: &'static str,
}

fn aitken(l: &[f64], n: usize) -> Option<f64> {
    // growth rate of G_n - G_{n-1} from three consecutive log2 values
    if n < 3 {
        return None;
    }
    let (d1, d2) = (l[n - 1] - l[n - 2], l[n - 2] - l[n - 3]);
    if d1 == 0.0 && d2 == 0.0 {
        return Some(0.0);
    }
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() {
        return None;
    }
    let ln2 = std::f64::consts::LN_2;
    let r = (-d1 * ln2).exp_m1() / (-d2 * ln2).exp_m1();
    let g = d1 + r.log2();
    g.is_finite().then_some(g)
}

/// Estimates `lim_n (1/n) log2 G_n` from `log2_g[n-1] = log2 G_n`, `n = 1..=n_max`.
///
/// The point estimate models `G_n ≈ A 2^{γ n} + B` (the shape of dyadic sums
/// of power profiles) and solves for `γ` from the last three terms. When the
/// fit is unstable it falls back to the last increment, then to the raw value.
pub fn growth_exponent(log2_g: &[f64], side: Side) -> GrowthEstimate {
    let n = log2_g.len();
    assert!(n >= 1, "need at least one term");
    let raw: Vec<f64> = log2_g.iter().enumerate().map(|(i, l)| l / (i + 1) as f64).collect();
    let at_n_max = raw[n - 1];
    let certified = match side {
        Side::Upper => raw.iter().copied().fold(f64::INFINITY, f64::min),
        Side::Lower => raw.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    let increment = if n >= 2 { log2_g[n - 1] - log2_g[n - 2] } else { at_n_max };
    let (point, method) = match (aitken(log2_g, n), aitken(log2_g, n.saturating_sub(1))) {
        (Some(a), Some(b)) if (a - b).abs() <= 1e-2 => (a, "geometric_extrapolation"),
        _ if n >= 2 => (increment, "increment"),
        _ => (at_n_max, "raw"),
    };
    GrowthEstimate { point, certified, increment, at_n_max, method }
}

/// Numbers that may be `+∞`, serialized as the string `"inf"` in that case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extended(pub f64);

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str(if self.0 > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub point: f64,
}

impl Interval {
    fn exact(v: f64) -> Self {
        Interval { lo: v, hi: v, point: v }
    }

    fn from_estimate(e: &GrowthEstimate, offset: f64, scale: f64) -> Self {
        let c = |v: f64| (offset + scale * v).clamp(0.0, 1.0);
        let vals = [c(e.point), c(e.certified), c(e.increment)];
        Interval {
            lo: vals.iter().copied().fold(f64::INFINITY, f64::min),
            hi: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            point: vals[0],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexParams {
    pub n_max: usize,
    pub j_max: usize,
    pub k_max: usize,
    pub dim: usize,
    pub seed: u64,
}

impl Default for IndexParams {
    fn default() -> Self {
        IndexParams { n_max: 16, j_max: 1 << 14, k_max: 1 << 14, dim: 1 << 12, seed: 7 }
    }
}

impl IndexParams {
    fn check(&self) -> Result<()> {
        if self.n_max < 2 || self.n_max > 60 {
            return Err(Error::ParameterRange(format!("n_max must be in 2..=60, got {}", self.n_max)));
        }
        if self.j_max < 1 || self.k_max < 1 {
            return Err(Error::ParameterRange("j_max and k_max must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub space: String,
    pub alpha: Interval,
    pub beta: Interval,
    pub mu: f64,
    pub nu: f64,
    pub f_interval: [Extended; 2],
    pub method: BTreeMap<String, String>,
    pub params: IndexParams,
}

/// `[1/β, 1/α]` from point estimates, with `1/0 = ∞`.
pub fn f_interval(report: &IndexReport) -> [f64; 2] {
    let inv = |v: f64| if v <= 0.0 { f64::INFINITY } else { 1.0 / v };
    [inv(report.beta.point), inv(report.alpha.point)]
}

/// Growth sequences `log2 G_n` for the two dilation directions.
struct Growth {
    /// `log2 sup_m φ(2^n m) / φ(m)`: the upper index, log-subadditive.
    up: Vec<f64>,
    /// `log2 inf_m φ(2^n m) / φ(m)`: the lower index, log-superadditive.
    down: Vec<f64>,
    /// The index is `scale` times the growth exponent (`1/q` for `W^{1/q}`).
    scale: f64,
}

/// Dyadic dilation ratios of `W(m)^{1/q}` with `W(m) = Σ_{k<=m} k^{-s}` or
/// the prefix sums of a generator weight.
fn weighted_growth(q: f64, w: &WeightSeq, n_max: usize, j_max: usize) -> Result<(Growth, usize)> {
    w.require_generator()?;
    let (j_max, big): (usize, Box<dyn Fn(f64) -> f64>) = match w {
        WeightSeq::Power { theta } => {
            let s = q * theta;
            (j_max, Box::new(move |m| power_sum(s, m)))
        }
        _ => {
            let j = j_max.min(DIRECT_SUM_CAP >> n_max).max(1);
            let top = j << n_max;
            let mut prefix = Vec::with_capacity(top + 1);
            prefix.push(0.0);
            let mut acc = 0.0;
            for k in 1..=top {
                acc += w.weight(k).expect("generator").powf(q);
                prefix.push(acc);
            }
            (j, Box::new(move |m| prefix[m as usize]))
        }
    };
    let small: Vec<f64> = (1..=j_max).map(|j| big(j as f64)).collect();
    let mut up = Vec::with_capacity(n_max);
    let mut down = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let m = 2f64.powi(n as i32);
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for (i, wj) in small.iter().enumerate() {
            let r = big(m * (i + 1) as f64) / wj;
            hi = hi.max(r);
            lo = lo.min(r);
        }
        up.push(hi.log2());
        down.push(lo.log2());
    }
    Ok((Growth { up, down, scale: 1.0 / q }, j_max))
}

/// `log2 N^{-1}(2^{-i})` for `i = 0..=top`, stopping at the inverse floor.
fn orlicz_inverse_logs(n: &OrliczFn, top: usize) -> Result<Vec<f64>> {
    let floor = (-INVERSE_FLOOR.log2()).floor() as usize;
    (0..=top.min(floor)).map(|i| Ok(n.inverse(2f64.powi(-(i as i32)))?.log2())).collect()
}

fn orlicz_growth(n: &OrliczFn, n_max: usize, k_max: usize) -> Result<Growth> {
    let inv = orlicz_inverse_logs(n, k_max.saturating_add(n_max))?;
    let last = inv.len() - 1;
    if last < n_max {
        return Err(Error::ParameterRange(format!("k_max too small for n_max = {n_max}")));
    }
    let mut up = Vec::with_capacity(n_max);
    let mut down = Vec::with_capacity(n_max);
    for d in 1..=n_max {
        // sup_{d <= k} N^{-1}(2^{-k+d}) / N^{-1}(2^{-k})
        up.push((d..=last).map(|k| inv[k - d] - inv[k]).fold(f64::NEG_INFINITY, f64::max));
        // 1 / sup_{k} N^{-1}(2^{-k-d}) / N^{-1}(2^{-k})
        down.push((0..=last - d).map(|k| inv[k] - inv[k + d]).fold(f64::INFINITY, f64::min));
    }
    Ok(Growth { up, down, scale: 1.0 })
}

fn growth_for(space: &SpaceSpec, p: &IndexParams) -> Result<Option<(Growth, usize)>> {
    match space {
        SpaceSpec::Lp { .. } => Ok(None),
        SpaceSpec::LpQ { q, .. } if q.is_infinite() => Ok(None),
        SpaceSpec::LpQ { p: pp, q } => {
            // ℓ^{p,q} = λ_q(w) with w_k = k^{1/p - 1/q}
            let w = WeightSeq::Power { theta: 1.0 / q - 1.0 / pp };
            weighted_growth(*q, &w, p.n_max, p.j_max).map(Some)
        }
        SpaceSpec::Lorentz { q, w } => weighted_growth(*q, w, p.n_max, p.j_max).map(Some),
        SpaceSpec::Orlicz { n } => Ok(Some((orlicz_growth(n, p.n_max, p.k_max)?, p.k_max))),
    }
}

fn closed_form_index(space: &SpaceSpec) -> Option<f64> {
    match space {
        SpaceSpec::Lp { p } => Some(if p.is_infinite() { 0.0 } else { 1.0 / p }),
        SpaceSpec::LpQ { p, q } if q.is_infinite() => Some(1.0 / p),
        _ => None,
    }
}

/// `(α, β)` intervals.
pub fn boyd_indices(space: &SpaceSpec, params: &IndexParams) -> Result<(Interval, Interval)> {
    space.validate()?;
    params.check()?;
    if let Some(v) = closed_form_index(space) {
        return Ok((Interval::exact(v), Interval::exact(v)));
    }
    let (g, _) = growth_for(space, params)?.expect("non closed-form space");
    let a = growth_exponent(&g.down, Side::Lower);
    let b = growth_exponent(&g.up, Side::Upper);
    Ok((Interval::from_estimate(&a, 0.0, g.scale), Interval::from_estimate(&b, 0.0, g.scale)))
}

/// `(μ, ν)` from the fundamental function. For every built-in variant the
/// dilation sups of `φ` reduce to the same sequences as the Boyd routes.
pub fn fundamental_indices(space: &SpaceSpec, params: &IndexParams) -> Result<(f64, f64)> {
    space.validate()?;
    params.check()?;
    if let Some(v) = closed_form_index(space) {
        return Ok((v, v));
    }
    let (g, _) = growth_for(space, params)?.expect("non closed-form space");
    let m = (g.scale * growth_exponent(&g.down, Side::Lower).point).clamp(0.0, 1.0);
    let n = (g.scale * growth_exponent(&g.up, Side::Upper).point).clamp(0.0, 1.0);
    Ok((m, n))
}

/// Dilation indices of `l_N` from the inverse of `N` on dyadic arguments.
pub fn orlicz_indices(n: &OrliczFn, n_max: usize, k_max: usize) -> Result<(Interval, Interval)> {
    let params = IndexParams { n_max, k_max, ..IndexParams::default() };
    params.check()?;
    let margin = crate::spaces::delta2_margin(n, 1e-12, 400)?;
    if !margin.is_finite() {
        return Err(Error::Unsupported("N fails the delta_2 condition at zero".into()));
    }
    let g = orlicz_growth(n, n_max, k_max)?;
    let a = growth_exponent(&g.down, Side::Lower);
    let b = growth_exponent(&g.up, Side::Upper);
    Ok((Interval::from_estimate(&a, 0.0, g.scale), Interval::from_estimate(&b, 0.0, g.scale)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LorentzRoute {
    /// Dilation ratios of the partial sums `Σ_{k<=m} w_k^q`.
    PartialSums,
    /// Dyadic decay of the weights themselves; needs the dyadic decay
    /// condition checked by [`dyadic_decay_condition`].
    DyadicWeights,
}

/// `(α, β)` of `λ_q(w)` along the chosen route.
///
/// The dyadic route uses
/// `α = 1/q - lim (1/n) log2 sup_k w_{2^k}/w_{2^{k+n}}` and
/// `β = 1/q + lim (1/n) log2 sup_{k>n} w_{2^k}/w_{2^{k-n}}`.
pub fn lorentz_indices(
    q: f64,
    w: &WeightSeq,
    n_max: usize,
    j_max: usize,
    route: LorentzRoute,
) -> Result<(Interval, Interval)> {
    let space = SpaceSpec::lorentz(q, w.clone())?;
    let params = IndexParams { n_max, j_max, ..IndexParams::default() };
    match route {
        LorentzRoute::PartialSums => boyd_indices(&space, &params),
        LorentzRoute::DyadicWeights => {
            params.check()?;
            let cond = dyadic_decay_condition(q, w, n_max, 40)?;
            if !cond.holds {
                return Err(Error::ConditionFailed { margin: cond.margin });
            }
            let k_top = match w {
                WeightSeq::Power { .. } => 40,
                _ => 62 - n_max,
            };
            let drop: Vec<f64> = (1..=n_max)
                .map(|n| dyadic_weight_drop(w, n, k_top).ok_or(Error::ParameterRange("n_max too large".into())))
                .collect::<Result<_>>()?;
            let rise: Vec<f64> = (1..=n_max)
                .map(|n| {
                    (n + 1..=k_top + n)
                        .map_while(|k| Some(log2_weight_at_pow2(w, k)? - log2_weight_at_pow2(w, k - n)?))
                        .reduce(f64::max)
                        .ok_or(Error::ParameterRange("n_max too large".into()))
                })
                .collect::<Result<_>>()?;
            let a = growth_exponent(&drop, Side::Upper);
            let b = growth_exponent(&rise, Side::Upper);
            Ok((Interval::from_estimate(&a, 1.0 / q, -1.0), Interval::from_estimate(&b, 1.0 / q, 1.0)))
        }
    }
}

/// Full report: Boyd and fundamental indices plus the exponent interval.
pub fn index_report(space: &SpaceSpec, params: &IndexParams) -> Result<IndexReport> {
    let (alpha, beta) = boyd_indices(space, params)?;
    let (mu, nu) = fundamental_indices(space, params)?;
    let mut method = BTreeMap::new();
    let tag = if closed_form_index(space).is_some() { "closed_form" } else { "truncated_sup" };
    for k in ["alpha", "beta", "mu", "nu"] {
        method.insert(k.to_string(), tag.to_string());
    }
    if let SpaceSpec::LpQ { p, q } = space {
        if q > p {
            method.insert("caveat".into(), "quasi-norm: increasing weight profile, formulas applied formally".into());
        }
    }
    let mut report = IndexReport {
        space: space.label(),
        alpha,
        beta,
        mu,
        nu,
        f_interval: [Extended(0.0), Extended(0.0)],
        method,
        params: params.clone(),
    };
    let f = f_interval(&report);
    report.f_interval = [Extended(f[0]), Extended(f[1])];
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct FundamentalTypeCheck {
    pub evidence: bool,
    /// `(α - μ, ν - β)` from point estimates.
    pub gaps: (f64, f64),
}

pub fn fundamental_type_check(report: &IndexReport, tol: f64) -> FundamentalTypeCheck {
    let gaps = (report.alpha.point - report.mu, report.nu - report.beta.point);
    FundamentalTypeCheck { evidence: gaps.0.abs() < tol && gaps.1.abs() < tol, gaps }
}

/// `α ≤ μ ≤ ν ≤ β` on point estimates, within `slack`.
pub fn ordering_holds(report: &IndexReport, slack: f64) -> bool {
    let (a, m, n, b) = (report.alpha.point, report.mu, report.nu, report.beta.point);
    -slack <= a && a <= m + slack && m <= n + slack && n <= b + slack && b <= 1.0 + slack
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrapolation_on_model_sequences() {
        // A 2^{γn} + B
        let g: Vec<f64> = (1..=16).map(|n| (3.0 * 2f64.powf(0.3 * n as f64) - 1.7).log2()).collect();
        let e = growth_exponent(&g, Side::Upper);
        assert!((e.point - 0.3).abs() < 1e-9, "{e:?}");
        // linear growth has exponent zero
        let g: Vec<f64> = (1..=16).map(|n| (5.0 + n as f64).log2()).collect();
        assert!(growth_exponent(&g, Side::Upper).point.abs() < 1e-9);
    }

    #[test]
    fn lp_closed_form() {
        for p in [1.0, 1.5, 2.0, 3.0, 10.0] {
            let r = index_report(&SpaceSpec::lp(p).unwrap(), &IndexParams::default()).unwrap();
            assert_eq!(r.alpha.point, 1.0 / p);
            assert_eq!(r.beta.point, 1.0 / p);
            let f = f_interval(&r);
            assert!((f[0] - p).abs() < 1e-12 && (f[1] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn orlicz_power() {
        for p in [1.0, 2.0, 3.5] {
            let (a, b) = orlicz_indices(&OrliczFn::power(p).unwrap(), 16, 200).unwrap();
            assert!((a.point - 1.0 / p).abs() < 1e-8 && (b.point - 1.0 / p).abs() < 1e-8);
        }
    }

    #[test]
    fn constant_weight_is_lq() {
        for q in [1.0, 2.0, 3.0] {
            let (a, b) = lorentz_indices(q, &WeightSeq::constant(), 12, 256, LorentzRoute::PartialSums).unwrap();
            assert!((a.point - 1.0 / q).abs() < 1e-9 && (b.point - 1.0 / q).abs() < 1e-9);
        }
    }

    #[test]
    fn infinite_reciprocal() {
        let mut r = index_report(&SpaceSpec::lp(2.0).unwrap(), &IndexParams::default()).unwrap();
        r.alpha.point = 0.0;
        assert_eq!(f_interval(&r)[1], f64::INFINITY);
        assert_eq!(serde_json::to_value(Extended(f64::INFINITY)).unwrap(), "inf");
    }
}
