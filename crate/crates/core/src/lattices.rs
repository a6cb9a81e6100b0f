//! Sequence lattices attached to a symmetric space: the dyadic-block lattice
//! `E_X`, weighted `ℓ_q(μ)`, and the Orlicz-type lattice `U_N`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling;
use crate::seq::{rearranged_abs, Seq};
use crate::spaces::{fundamental_function_f, norm_dyadic_blocks, norm_slice, OrliczFn, SpaceSpec, WeightSeq};

/// Coordinates of `E_X` vectors with a non-`ℓ^p` base beyond which norms are refused.
pub const EX_DEFAULT_CAP: usize = 24;

/// Positive weights `μ_k` for `ℓ_q(μ)`.
#[derive(Clone, Debug)]
pub enum LatticeWeights {
    /// `μ_k = r^{k-1}`.
    Geometric { ratio: f64 },
    /// `μ_k = 2^{(k-1)/q} w_{2^{k-1}}`: the dyadic samples of a Lorentz weight.
    LorentzSamples { w: WeightSeq },
    Array(Arc<[f64]>),
}

#[derive(Clone, Debug)]
pub enum LatticeSpec {
    EX { base: SpaceSpec },
    WeightedLq { q: f64, mu: LatticeWeights },
    UN { n: OrliczFn },
}

impl LatticeSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LatticeSpec::EX { base } => base.validate(),
            LatticeSpec::WeightedLq { q, mu } => {
                if !(q.is_finite() && *q >= 1.0) {
                    return Err(Error::ParameterRange(format!("weighted l_q needs 1 <= q < inf, got {q}")));
                }
                match mu {
                    LatticeWeights::Geometric { ratio } if !(ratio.is_finite() && *ratio > 0.0) => {
                        Err(Error::InvalidWeights(format!("geometric ratio must be > 0, got {ratio}")))
                    }
                    LatticeWeights::Array(v) if v.iter().any(|m| !(m.is_finite() && *m > 0.0)) => {
                        Err(Error::InvalidWeights("mu_k must be positive".into()))
                    }
                    LatticeWeights::Array(v) if v.is_empty() => Err(Error::InvalidWeights("empty mu".into())),
                    _ => Ok(()),
                }
            }
            LatticeSpec::UN { .. } => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            LatticeSpec::EX { base } => format!("E[{}]", base.label()),
            LatticeSpec::WeightedLq { q, .. } => format!("l_{q}(mu)"),
            LatticeSpec::UN { n } => format!("U[{n:?}]"),
        }
    }
}

/// `log μ_k`, or `None` once it leaves the representable range.
fn log_mu(q: f64, mu: &LatticeWeights, k: usize) -> Option<f64> {
    let e = (k - 1) as f64;
    match mu {
        LatticeWeights::Geometric { ratio } => Some(e * ratio.ln()),
        LatticeWeights::Array(v) => v.get(k - 1).map(|m| m.ln()),
        LatticeWeights::LorentzSamples { w } => {
            let lw = match w {
                WeightSeq::Power { theta } => -theta * e * std::f64::consts::LN_2,
                _ => {
                    if k > 63 {
                        return None;
                    }
                    w.weight(1usize << (k - 1))?.ln()
                }
            };
            Some(e * std::f64::consts::LN_2 / q + lw)
        }
    }
}

fn mu_k(q: f64, mu: &LatticeWeights, k: usize) -> Result<f64> {
    let direct = match mu {
        LatticeWeights::Geometric { ratio } if k <= i32::MAX as usize => Some(ratio.powi(k as i32 - 1)),
        LatticeWeights::Array(v) => v.get(k - 1).copied(),
        _ => log_mu(q, mu, k).map(f64::exp),
    };
    direct.filter(|m| m.is_finite() && *m > 0.0).ok_or_else(|| {
        Error::DimensionCap {
            what: "lattice weight index",
            needed: k as u128,
            cap: match mu {
                LatticeWeights::Array(v) => v.len() as u128,
                _ => 63,
            },
        }
    })
}

/// `‖a‖_E`. For `E_X` with a non-`ℓ^p` base, vectors longer than
/// [`EX_DEFAULT_CAP`] are refused.
pub fn lattice_norm(lat: &LatticeSpec, a: &Seq) -> Result<f64> {
    lattice_norm_capped(lat, a.as_slice(), EX_DEFAULT_CAP)
}

pub fn lattice_norm_capped(lat: &LatticeSpec, a: &[f64], ex_cap: usize) -> Result<f64> {
    lat.validate()?;
    match lat {
        LatticeSpec::EX { base } => {
            let unbounded = matches!(base, SpaceSpec::Lp { .. });
            if !unbounded && a.len() > ex_cap {
                return Err(Error::DimensionCap {
                    what: "E_X coordinates",
                    needed: a.len() as u128,
                    cap: ex_cap as u128,
                });
            }
            norm_dyadic_blocks(base, a)
        }
        LatticeSpec::WeightedLq { q, mu } => {
            let terms = a
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| Ok(v.abs() * mu_k(*q, mu, i + 1)?))
                .collect::<Result<Vec<f64>>>()?;
            let max = terms.iter().copied().fold(0.0, f64::max);
            if max == 0.0 {
                return Ok(0.0);
            }
            let s: f64 = terms.iter().map(|t| (t / max).powf(*q)).sum();
            Ok(max * s.powf(1.0 / q))
        }
        LatticeSpec::UN { n } => norm_dyadic_blocks(&SpaceSpec::Orlicz { n: n.clone() }, a),
    }
}

/// `ln s_k` with `s_k = ‖e_k‖_E`; `None` when `s_k` leaves the float range.
fn log_unit_norm(lat: &LatticeSpec, k: usize) -> Result<Option<f64>> {
    match lat {
        LatticeSpec::EX { base } => {
            let e = (k - 1) as f64;
            if let SpaceSpec::Lp { p } = base {
                return Ok(Some(if p.is_infinite() { 0.0 } else { e * std::f64::consts::LN_2 / p }));
            }
            if k > 1000 {
                return Ok(None);
            }
            match fundamental_function_f(base, 2f64.powi(k as i32 - 1)) {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(Some(v.ln())),
                Ok(_) | Err(Error::DimensionCap { .. }) | Err(Error::NotBracketable(_)) => Ok(None),
                Err(e) => Err(e),
            }
        }
        LatticeSpec::WeightedLq { q, mu } => Ok(match mu_k(*q, mu, k) {
            Ok(m) => Some(m.ln()),
            Err(_) => log_mu(*q, mu, k),
        }),
        LatticeSpec::UN { n } => {
            let s = 2f64.powi(1 - k as i32);
            if !(s >= crate::spaces::INVERSE_FLOOR) {
                return Ok(None);
            }
            Ok(Some(-n.inverse(s)?.ln()))
        }
    }
}

/// `(s_k)_{k <= k_max}`, `s_k = ‖e_k‖_E`.
pub fn unit_norms(lat: &LatticeSpec, k_max: usize) -> Result<Vec<f64>> {
    lat.validate()?;
    if k_max < 1 {
        return Err(Error::ParameterRange("k_max must be >= 1".into()));
    }
    (1..=k_max)
        .map(|k| {
            let v = match lat {
                LatticeSpec::EX { base } => fundamental_function_f(base, 2f64.powi(k as i32 - 1))?,
                LatticeSpec::WeightedLq { q, mu } => mu_k(*q, mu, k)?,
                LatticeSpec::UN { n } => 1.0 / n.inverse(2f64.powi(1 - k as i32))?,
            };
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::DimensionCap { what: "unit vector norm index", needed: k as u128, cap: (k - 1) as u128 })
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftExponents {
    /// `(sup_k s_k / s_{k-n})^{1/n}` at `n = n_max`.
    pub k_plus: f64,
    /// Minimum over `n <= n_max` of the same quantity.
    pub k_plus_inf: f64,
    /// `(sup_k s_k / s_{k+n})^{1/n}` at `n = n_max`.
    pub k_minus: f64,
    pub k_minus_inf: f64,
    /// Geometric extrapolation of the sups, see [`crate::indices::growth_exponent`].
    pub log2_k_plus_extrapolated: f64,
    pub log2_k_minus_extrapolated: f64,
    /// Unit norms actually used (`k_max` shortened to the float range).
    pub k_used: usize,
}

/// Estimates the shift exponents `k_±(E) = lim_n ‖τ_{±n}|_{e_k}‖^{1/n}` from
/// the unit norms `s_k`, `k <= k_max`.
pub fn shift_exponents(lat: &LatticeSpec, n_max: usize, k_max: usize) -> Result<ShiftExponents> {
    lat.validate()?;
    if n_max < 2 || k_max < 2 {
        return Err(Error::ParameterRange("shift exponents need n_max, k_max >= 2".into()));
    }
    let mut logs = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        match log_unit_norm(lat, k)? {
            Some(l) if l.is_finite() => logs.push(l),
            _ => break,
        }
    }
    let k_used = logs.len();
    if k_used <= n_max {
        return Err(Error::DimensionCap {
            what: "unit norms for shift exponents",
            needed: n_max as u128 + 1,
            cap: k_used as u128,
        });
    }
    // ln sup_k s_k/s_{k-n} and ln sup_k s_k/s_{k+n}
    let plus: Vec<f64> = (1..=n_max)
        .map(|n| (n..k_used).map(|i| logs[i] - logs[i - n]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let minus: Vec<f64> = (1..=n_max)
        .map(|n| (0..k_used - n).map(|i| logs[i] - logs[i + n]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let root = |v: &[f64], n: usize| (v[n - 1] / n as f64).exp();
    let inf = |v: &[f64]| (1..=n_max).map(|n| root(v, n)).fold(f64::INFINITY, f64::min);
    let to_growth = |v: &[f64]| v.iter().map(|l| l / std::f64::consts::LN_2).collect::<Vec<_>>();
    let ep = crate::indices::growth_exponent(&to_growth(&plus), crate::indices::Side::Upper);
    let em = crate::indices::growth_exponent(&to_growth(&minus), crate::indices::Side::Upper);
    Ok(ShiftExponents {
        k_plus: root(&plus, n_max),
        k_plus_inf: inf(&plus),
        k_minus: root(&minus, n_max),
        k_minus_inf: inf(&minus),
        log2_k_plus_extrapolated: ep.point,
        log2_k_minus_extrapolated: em.point,
        k_used,
    })
}

/// `‖Σ_k x*_{2^k} e_{k+1}‖_{E_X} / ‖x‖_X`; always in `[1, 5]`.
pub fn sandwich_ratio(base: &SpaceSpec, x: &Seq) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::ParameterRange("sandwich ratio needs x != 0".into()));
    }
    let r = rearranged_abs(x.as_slice());
    let samples = dyadic_samples(&r);
    Ok(norm_dyadic_blocks(base, &samples)? / norm_slice(base, x.as_slice())?)
}

/// `(x*_1, x*_2, x*_4, ...)` from an already rearranged vector.
fn dyadic_samples(r: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 1usize;
    while i <= r.len() {
        out.push(r[i - 1]);
        i *= 2;
    }
    out
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    /// Lorentz norm against `ℓ_q(μ)` of the dyadic samples, `μ_k = 2^{(k-1)/q} w_{2^{k-1}}`.
    Lorentz { q: f64, w: WeightSeq },
    /// Orlicz norm against `U_N` of the dyadic samples.
    Orlicz { n: OrliczFn },
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub kind: &'static str,
    pub trials: usize,
    /// Observed `‖dyadic samples‖_lattice / ‖x‖_space`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub max_len: usize,
    pub seed: u64,
}

/// Runs both sides of the dyadic-sample equivalence on random decreasing
/// vectors and reports the observed ratio envelope.
pub fn ex_equivalence_report(
    kind: &Equivalence,
    trials: usize,
    max_len: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    let (space, lat, label) = match kind {
        Equivalence::Lorentz { q, w } => (
            SpaceSpec::lorentz(*q, w.clone())?,
            LatticeSpec::WeightedLq { q: *q, mu: LatticeWeights::LorentzSamples { w: w.clone() } },
            "lorentz",
        ),
        Equivalence::Orlicz { n } => (SpaceSpec::orlicz(n.clone()), LatticeSpec::UN { n: n.clone() }, "orlicz"),
    };
    let ratios = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sampling::rng(seed, t as u64);
            // the first trial is e_1, where both sides agree
            let x = if t == 0 { vec![1.0] } else {
                let len = sampling::length(&mut rng, max_len);
                sampling::decreasing(&mut rng, len)
            };
            let lhs = lattice_norm_capped(&lat, &dyadic_samples(&x), usize::MAX)?;
            Ok(lhs / norm_slice(&space, &x)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EquivalenceReport {
        kind: label,
        trials,
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        max_len,
        seed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub holds: bool,
    /// `2^{1/q}` minus the estimated `lim_n (sup_k w_{2^k}/w_{2^{k+n}})^{1/n}`.
    pub margin: f64,
    pub estimate: f64,
}

/// `log2 w_{2^e}`, or `None` when the index is out of reach.
pub(crate) fn log2_weight_at_pow2(w: &WeightSeq, e: usize) -> Option<f64> {
    match w {
        WeightSeq::Power { theta } => Some(-theta * e as f64),
        _ => {
            if e > 62 {
                return None;
            }
            w.weight(1usize << e).map(f64::log2)
        }
    }
}

/// `ln sup_{0 <= k <= k_max} w_{2^k} / w_{2^{k+n}}` in base 2, over the
/// indices that stay in range.
pub(crate) fn dyadic_weight_drop(w: &WeightSeq, n: usize, k_max: usize) -> Option<f64> {
    (0..=k_max)
        .map_while(|k| Some(log2_weight_at_pow2(w, k)? - log2_weight_at_pow2(w, k + n)?))
        .reduce(f64::max)
}

/// Checks that the dyadic decay of `w` stays strictly below `2^{1/q}`.
pub fn dyadic_decay_condition(q: f64, w: &WeightSeq, n_max: usize, k_max: usize) -> Result<Condition> {
    w.require_generator()?;
    if n_max < 1 {
        return Err(Error::ParameterRange("n_max must be >= 1".into()));
    }
    let drop = dyadic_weight_drop(w, n_max, k_max).ok_or_else(|| {
        Error::DimensionCap { what: "dyadic weight index", needed: n_max as u128, cap: 62 }
    })?;
    let estimate = 2f64.powf(drop / n_max as f64);
    let margin = 2f64.powf(1.0 / q) - estimate;
    Ok(Condition { holds: margin > 1e-9, margin, estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::fundamental_function;

    fn ex(p: f64) -> LatticeSpec {
        LatticeSpec::EX { base: SpaceSpec::lp(p).unwrap() }
    }

    #[test]
    fn unit_vector_norms() {
        for k in 1..8 {
            let v = lattice_norm(&ex(3.0), &Seq::unit(k)).unwrap();
            assert!((v - 2f64.powf((k - 1) as f64 / 3.0)).abs() < 1e-12 * v);
            let un = LatticeSpec::UN { n: OrliczFn::power(2.0).unwrap() };
            let u = lattice_norm(&un, &Seq::unit(k)).unwrap();
            assert!((u - 2f64.powf((k - 1) as f64 / 2.0)).abs() < 1e-12 * u);
        }
        let s = unit_norms(&ex(2.0), 4).unwrap();
        let want = [1.0, 2f64.sqrt(), 2.0, 2.0 * 2f64.sqrt()];
        for (a, b) in s.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let wl = LatticeSpec::WeightedLq { q: 2.0, mu: LatticeWeights::Array(vec![3.0, 2.0, 5.0].into()) };
        assert_eq!(lattice_norm(&wl, &Seq::unit(3)).unwrap(), 5.0);
    }

    #[test]
    fn unit_norms_match_fundamental_function() {
        let bases = [
            SpaceSpec::lp(1.5).unwrap(),
            SpaceSpec::lorentz(2.0, WeightSeq::power(0.25).unwrap()).unwrap(),
            SpaceSpec::orlicz(OrliczFn::power_log(2.0, 0.5).unwrap()),
        ];
        for base in bases {
            let s = unit_norms(&LatticeSpec::EX { base: base.clone() }, 10).unwrap();
            for (k, v) in s.iter().enumerate() {
                let f = fundamental_function(&base, 1 << k).unwrap();
                assert!((v - f).abs() <= 1e-12 * f, "{} k={}", base.label(), k + 1);
                let dense = lattice_norm(&LatticeSpec::EX { base: base.clone() }, &Seq::unit(k + 1)).unwrap();
                assert!((dense - f).abs() <= 1e-9 * f);
            }
        }
    }

    #[test]
    fn ex_cap() {
        let lor = LatticeSpec::EX { base: SpaceSpec::lorentz(2.0, WeightSeq::constant()).unwrap() };
        assert!(matches!(lattice_norm(&lor, &Seq::unit(25)), Err(Error::DimensionCap { .. })));
        assert!(lattice_norm(&ex(2.0), &Seq::unit(200)).is_ok());
    }

    #[test]
    fn shift_exponent_examples() {
        for q in [1.0, 2.0, 4.0] {
            let wl = LatticeSpec::WeightedLq { q, mu: LatticeWeights::Geometric { ratio: 2f64.powf(1.0 / q) } };
            let r = shift_exponents(&wl, 8, 64).unwrap();
            assert!((r.k_plus - 2f64.powf(1.0 / q)).abs() < 1e-6);
            assert!((r.k_minus - 2f64.powf(-1.0 / q)).abs() < 1e-6);
            let un = LatticeSpec::UN { n: OrliczFn::power(q).unwrap() };
            let r = shift_exponents(&un, 8, 64).unwrap();
            assert!((r.k_plus - 2f64.powf(1.0 / q)).abs() < 1e-6);
            assert!((r.k_minus - 2f64.powf(-1.0 / q)).abs() < 1e-6);
            assert!(1.0 / r.k_minus <= r.k_plus * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sandwich_single_entry() {
        let v = sandwich_ratio(&SpaceSpec::lp(1.0).unwrap(), &Seq::unit(1)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn condition_examples() {
        let c = dyadic_decay_condition(2.0, &WeightSeq::power(0.25).unwrap(), 10, 40).unwrap();
        assert!(c.holds && c.margin > 0.0);
        assert!((c.estimate - 2f64.powf(0.25)).abs() < 1e-12);
        let c = dyadic_decay_condition(2.0, &WeightSeq::constant(), 10, 40).unwrap();
        assert!(c.holds && (c.estimate - 1.0).abs() < 1e-15);
        let c = dyadic_decay_condition(2.0, &WeightSeq::power(0.5).unwrap(), 10, 40).unwrap();
        assert!(!c.holds && c.margin.abs() < 1e-12);
        assert!(dyadic_decay_condition(2.0, &WeightSeq::array(vec![1.0]).unwrap(), 10, 40).is_err());
    }
}
