use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type OrliczRule = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Power { p: f64 },
    /// `t^p (1 + a |ln t|)`
    PowerLog { p: f64, a: f64 },
    Custom { name: String, rule: OrliczRule },
}

/// An Orlicz function `N`, normalized so that `N(1) = 1`.
///
/// Construction probes `N` on a 1024-point geometric grid over `[1e-9, 1]`
/// and refuses functions that are not nondecreasing and midpoint convex there.
#[derive(Clone)]
pub struct OrliczFn {
    kind: Kind,
}

impl fmt::Debug for OrliczFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Power { p } => write!(f, "N(t) = t^{p}"),
            Kind::PowerLog { p, a } => write!(f, "N(t) = t^{p} (1 + {a} |ln t|)"),
            Kind::Custom { name, .. } => write!(f, "N = {name}"),
        }
    }
}

const GRID_POINTS: usize = 1024;
const GRID_MIN: f64 = 1e-9;
/// Smallest argument handed to the inverse.
pub const INVERSE_FLOOR: f64 = 1e-300;

impl OrliczFn {
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidOrlicz(format!("power needs 1 <= p < inf, got {p}")));
        }
        Self::checked(Kind::Power { p })
    }

    pub fn power_log(p: f64, a: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0 && a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidOrlicz(format!("power_log needs p >= 1, a >= 0 (p={p}, a={a})")));
        }
        Self::checked(Kind::PowerLog { p, a })
    }

    pub fn custom<F>(name: impl Into<String>, rule: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::checked(Kind::Custom {
            name: name.into(),
            rule: Arc::new(rule),
        })
    }

    fn checked(kind: Kind) -> Result<Self> {
        let n = OrliczFn { kind };
        n.validate()?;
        Ok(n)
    }

    fn validate(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::InvalidOrlicz("N(0) != 0".into()));
        }
        let one = self.eval(1.0);
        if (one - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidOrlicz(format!("N(1) = {one}, expected 1")));
        }
        let ratio = (1.0 / GRID_MIN).powf(1.0 / (GRID_POINTS - 1) as f64);
        let grid: Vec<f64> = (0..GRID_POINTS)
            .map(|i| if i + 1 == GRID_POINTS { 1.0 } else { GRID_MIN * ratio.powi(i as i32) })
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect();
        for (i, v) in vals.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::InvalidOrlicz(format!("N({}) = {v}", grid[i])));
            }
        }
        for i in 1..GRID_POINTS {
            if vals[i] < vals[i - 1] * (1.0 - 1e-12) {
                return Err(Error::InvalidOrlicz(format!("N decreases near t = {}", grid[i])));
            }
        }
        // midpoint convexity on neighbouring and wider pairs
        for gap in [1usize, 8, 64] {
            for i in 0..GRID_POINTS - gap {
                let (s, t) = (grid[i], grid[i + gap]);
                let mid = self.eval(0.5 * (s + t));
                let chord = 0.5 * (vals[i] + vals[i + gap]);
                if mid > chord * (1.0 + 1e-12) + 1e-300 {
                    return Err(Error::InvalidOrlicz(format!(
                        "N is not convex on [{s}, {t}]"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Power { p } => t.powf(*p),
            Kind::PowerLog { p, a } => t.powf(*p) * (1.0 + a * t.ln().abs()),
            Kind::Custom { rule, .. } => rule(t),
        }
    }

    /// The exponent when `N(t) = t^p`.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            Kind::Power { p } => Some(p),
            _ => None,
        }
    }

    /// `N^{-1}(s)`: bracket geometrically, then bisect until the bracket is
    /// relatively tight to machine precision.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::ParameterRange(format!("N^-1 needs s >= 0, got {s}")));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        let s = s.max(INVERSE_FLOOR);
        let (mut lo, mut hi) = (1.0f64, 1.0f64);
        let mut guard = 0;
        while self.eval(hi) < s {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 2000 || !hi.is_finite() {
                return Err(Error::NotBracketable(s));
            }
        }
        guard = 0;
        while self.eval(lo) > s {
            hi = lo;
            lo *= 0.5;
            guard += 1;
            if guard > 2000 || lo == 0.0 {
                return Err(Error::NotBracketable(s));
            }
        }
        if lo == hi {
            return Ok(lo);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // choose the endpoint closer in value
        let (el, eh) = ((self.eval(lo) - s).abs(), (self.eval(hi) - s).abs());
        Ok(if el <= eh { lo } else { hi })
    }
}

/// Luxemburg functional `inf { u > 0 : sum_k c_k N(|x_k| / u) <= 1 }` for
/// magnitudes `x_k` with multiplicities `c_k >= 1`.
pub(crate) fn luxemburg(n: &OrliczFn, terms: &[(f64, f64)]) -> f64 {
    let terms: Vec<(f64, f64)> = terms.iter().copied().filter(|(v, c)| *v != 0.0 && *c > 0.0).collect();
    if terms.is_empty() {
        return 0.0;
    }
    let modular = |u: f64| -> f64 { terms.iter().map(|(v, c)| c * n.eval(v.abs() / u)).sum() };
    let max = terms.iter().fold(0.0f64, |m, (v, _)| m.max(v.abs()));
    // N(2) >= 2 by convexity, so u = max/2 is infeasible; N(t) <= t on [0,1]
    // makes u = sum c|v| feasible.
    let mut lo = max / 2.0;
    let mut hi: f64 = terms.iter().map(|(v, c)| c * v.abs()).sum();
    if !hi.is_finite() {
        hi = max;
        while modular(hi) > 1.0 {
            hi *= 2.0;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-16 * hi {
            break;
        }
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Largest `N(2u)/N(u)` over a log-spaced grid on `[u_min, 1/2]`.
pub fn delta2_margin(n: &OrliczFn, u_min: f64, samples: usize) -> Result<f64> {
    if !(u_min > 0.0 && u_min < 0.5) {
        return Err(Error::ParameterRange(format!("delta2 grid needs 0 < u_min < 1/2, got {u_min}")));
    }
    let samples = samples.max(2);
    let step = (0.5 / u_min).ln() / (samples - 1) as f64;
    let mut best = 0.0f64;
    for i in 0..samples {
        let u = u_min * (step * i as f64).exp();
        let (a, b) = (n.eval(2.0 * u), n.eval(u));
        let r = if b > 0.0 { a / b } else { f64::INFINITY };
        best = best.max(r);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let sq = OrliczFn::power(2.0).unwrap();
        assert!((sq.inverse(9.0).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(sq.inverse(0.0).unwrap(), 0.0);
        assert!((sq.inverse(1.0 / 16.0).unwrap() - 0.25).abs() < 1e-16);
        let t = sq.inverse(2f64.powi(-200)).unwrap();
        assert!((t / 2f64.powi(-100) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_residual_bound() {
        let n = OrliczFn::power_log(2.0, 0.5).unwrap();
        for s in [1e-290, 1e-100, 1e-12, 1e-3, 0.3, 1.0, 7.5, 1e6] {
            let t = n.inverse(s).unwrap();
            assert!((n.eval(t) - s).abs() <= 1e-13 * s.max(1.0), "s = {s}");
        }
    }

    #[test]
    fn rejects_bad_functions() {
        assert!(OrliczFn::power(0.5).is_err());
        assert!(OrliczFn::custom("concave", |t: f64| t.sqrt()).is_err());
        assert!(OrliczFn::custom("unnormalized", |t: f64| 2.0 * t * t).is_err());
        // t^2 (1 + a|ln t|) loses convexity near t = 1 once a > p(p-1)/(2p-1)
        assert!(OrliczFn::power_log(2.0, 0.6).is_ok());
        assert!(OrliczFn::power_log(2.0, 1.0).is_err());
    }

    #[test]
    fn bounded_ceiling_not_bracketable() {
        // convex, N(1)=1, but we ask far beyond any reachable value
        let n = OrliczFn::power(1.0).unwrap();
        assert!(matches!(n.inverse(1e308 * 10.0), Err(Error::ParameterRange(_))));
    }

    #[test]
    fn delta2_examples() {
        for p in [1.0, 2.0, 3.5] {
            let n = OrliczFn::power(p).unwrap();
            let m = delta2_margin(&n, 1e-6, 200).unwrap();
            assert!((m - 2f64.powf(p)).abs() < 1e-12);
        }
    }
}
