//! The twelve acceptance criteria as runnable checks with observed values.
//!
//! Each criterion returns a [`CriterionResult`]; nothing here panics on a
//! failed check, so callers can print a full pass/fail table.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::indices::{
    fundamental_type_check, index_report, lorentz_indices, orlicz_indices, ordering_holds, IndexParams,
    LorentzRoute,
};
use crate::lattices::{ex_equivalence_report, lattice_norm, shift_exponents, sandwich_ratio, Equivalence, LatticeSpec};
use crate::operators::{apply_slice, OperatorSpec};
use crate::sampling;
use crate::scalar::trim;
use crate::seq::Seq;
use crate::spaces::{norm, norm_dyadic_blocks, OrliczFn, SpaceSpec, WeightSeq};
use crate::spectral::{
    doubling_witness_vn, dilation_support_disjointness, moment_functional, q0_witness_un, residual_scan, shift_witness_identity,
    solve_t_lambda, ScanConfig,
};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub observed: String,
    pub expected: String,
    #[serde(skip)]
    pub seconds: f64,
}

pub const NAMES: [&str; 12] = [
    "rearrangement invariance and lattice axioms",
    "operator norm constants",
    "dyadic sandwich",
    "intertwining exactness",
    "index round trips",
    "ordering chain and fundamental type",
    "shift-exponent bridge",
    "witness rates",
    "disjoint supports on Q0",
    "shift machinery",
    "equivalence envelopes",
    "spectrum-interval coherence",
];

struct Outcome {
    passed: bool,
    observed: String,
    expected: String,
}

fn outcome(passed: bool, observed: String, expected: impl Into<String>) -> Outcome {
    Outcome { passed, observed, expected: expected.into() }
}

fn power_weight(theta: f64) -> WeightSeq {
    WeightSeq::power(theta).expect("valid power weight")
}

/// Normed built-in spaces: every axiom of a symmetric space applies.
pub fn normed_variants() -> Vec<SpaceSpec> {
    let ok = "built-in space";
    vec![
        SpaceSpec::lp(1.0).expect(ok),
        SpaceSpec::lp(2.0).expect(ok),
        SpaceSpec::lp(3.5).expect(ok),
        SpaceSpec::lp(f64::INFINITY).expect(ok),
        SpaceSpec::lpq(3.0, 2.0).expect(ok),
        SpaceSpec::lorentz(2.0, power_weight(0.25)).expect(ok),
        SpaceSpec::lorentz(1.0, power_weight(0.3)).expect(ok),
        SpaceSpec::orlicz(OrliczFn::power(3.0).expect(ok)),
        SpaceSpec::orlicz(OrliczFn::power_log(2.0, 0.5).expect(ok)),
    ]
}

/// Normed variants plus the `ℓ^{p,q}` quasi-norms with `q > p`.
pub fn all_variants() -> Vec<SpaceSpec> {
    let mut v = normed_variants();
    v.push(SpaceSpec::lpq(2.0, 4.0).expect("built-in space"));
    v.push(SpaceSpec::lpq(2.0, f64::INFINITY).expect("built-in space"));
    v
}

fn rel_excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / rhs.abs().max(f64::MIN_POSITIVE)
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

fn c1(seed: u64) -> Result<Outcome> {
    let spaces = all_variants();
    let per_space: Vec<(f64, f64)> = spaces
        .par_iter()
        .enumerate()
        .map(|(s, space)| {
            let mut perm_dev = 0.0f64;
            let mut mono = f64::NEG_INFINITY;
            for t in 0..500u64 {
                let mut rng = sampling::rng(seed, (s as u64) << 32 | t);
                let len = rng.gen_range(1..=64);
                let x = sampling::gaussian(&mut rng, len);
                let mut y = x.clone();
                y.shuffle(&mut rng);
                let nx = norm(space, &Seq::new(x.clone())?)?;
                let ny = norm(space, &Seq::new(y)?)?;
                perm_dev = perm_dev.max((nx - ny).abs() / nx);
                let z: Vec<f64> = x.iter().map(|v| v * rng.gen::<f64>()).collect();
                let nz = norm(space, &Seq::new(z)?)?;
                mono = mono.max(rel_excess(nz, nx));
            }
            Ok((perm_dev, mono))
        })
        .collect::<Result<_>>()?;
    let perm = max_of(per_space.iter().map(|p| p.0));
    let mono = max_of(per_space.iter().map(|p| p.1));
    Ok(outcome(
        perm <= 1e-12 && mono <= 1e-12,
        format!("max permutation deviation {perm:.2e}, max monotonicity excess {mono:.2e} over {} spaces", spaces.len()),
        "both <= 1e-12 relative",
    ))
}

fn c2(seed: u64) -> Result<Outcome> {
    let spaces = normed_variants();
    let rows: Vec<[f64; 6]> = spaces
        .par_iter()
        .enumerate()
        .map(|(s, space)| {
            // worst relative excess of: down, up, Q; min and max of ‖Dx‖/‖x‖; Q^2 = Q failures
            let mut r = [f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY, f64::INFINITY, 0.0, 0.0];
            for t in 0..200u64 {
                let mut rng = sampling::rng(seed ^ 0x2, (s as u64) << 32 | t);
                let len = rng.gen_range(1..=64);
                let x = sampling::gaussian(&mut rng, len);
                let nx = norm(space, &Seq::new(x.clone())?)?;
                let ev = |op: &OperatorSpec| -> Result<f64> { norm(space, &Seq::from_finite(apply_slice(op, &x))) };
                for m in [2usize, 3, 5] {
                    r[0] = r[0].max(rel_excess(ev(&OperatorSpec::DilateDown(m))?, nx));
                    r[1] = r[1].max(rel_excess(ev(&OperatorSpec::DilateUp(m))?, m as f64 * nx));
                }
                r[2] = r[2].max(rel_excess(ev(&OperatorSpec::AvgProject)?, nx));
                let d = ev(&OperatorSpec::Doubling)? / nx;
                r[3] = r[3].min(d);
                r[4] = r[4].max(d);
                let xr: Vec<BigRational> = (0..len).map(|_| sampling::rational(&mut rng, 30, 12)).collect();
                let q1 = apply_slice(&OperatorSpec::AvgProject, &xr);
                let q2 = apply_slice(&OperatorSpec::AvgProject, &q1);
                if q1 != q2 {
                    r[5] += 1.0;
                }
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let down = max_of(rows.iter().map(|r| r[0]));
    let up = max_of(rows.iter().map(|r| r[1]));
    let q = max_of(rows.iter().map(|r| r[2]));
    let dmin = min_of(rows.iter().map(|r| r[3]));
    let dmax = max_of(rows.iter().map(|r| r[4]));
    let proj_fail: f64 = rows.iter().map(|r| r[5]).sum();
    let passed = down <= 1e-12
        && up <= 1e-12
        && q <= 1e-12
        && dmin >= 1.0 - 1e-9
        && dmax <= 2.0 * (1.0 + 1e-9)
        && proj_fail == 0.0;
    Ok(outcome(
        passed,
        format!(
            "excess sigma_down {down:.1e}, sigma_up {up:.1e}, Q {q:.1e}; ‖Dx‖/‖x‖ in [{dmin:.6}, {dmax:.6}]; Q^2 != Q in {proj_fail} cases"
        ),
        "excesses <= 1e-12 relative, ‖Dx‖/‖x‖ in [1-1e-9, 2(1+1e-9)], Q^2 = Q exactly",
    ))
}

fn c3(seed: u64) -> Result<Outcome> {
    let spaces = normed_variants();
    let env: Vec<(f64, f64)> = spaces
        .par_iter()
        .enumerate()
        .map(|(s, space)| {
            (0..500u64)
                .into_par_iter()
                .map(|t| {
                    let mut rng = sampling::rng(seed ^ 0x3, (s as u64) << 32 | t);
                    let len = sampling::length(&mut rng, 1 << 12);
                    let x = sampling::gaussian(&mut rng, len);
                    sandwich_ratio(space, &Seq::new(x)?)
                })
                .collect::<Result<Vec<f64>>>()
                .map(|v| (min_of(v.iter().copied()), max_of(v.iter().copied())))
        })
        .collect::<Result<_>>()?;
    let lo = min_of(env.iter().map(|e| e.0));
    let hi = max_of(env.iter().map(|e| e.1));
    Ok(outcome(
        lo >= 1.0 - 1e-9 && hi <= 5.0 + 1e-9,
        format!("ratios in [{lo:.6}, {hi:.6}] over {} spaces x 500 vectors", spaces.len()),
        "[1 - 1e-9, 5 + 1e-9]",
    ))
}

fn c4(seed: u64) -> Result<Outcome> {
    let fails: usize = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = sampling::rng(seed ^ 0x4, t);
            let lambda = sampling::positive_rational(&mut rng, 9, 4);
            let len = rng.gen_range(1..=10);
            let a: Vec<BigRational> = (0..len).map(|_| sampling::rational(&mut rng, 20, 9)).collect();
            let dl = OperatorSpec::DoublingMinusLambda(lambda.clone());
            let lhs = apply_slice(&dl, &apply_slice(&OperatorSpec::BlockEmbed, &a));
            let rhs = apply_slice(
                &OperatorSpec::BlockEmbed,
                &apply_slice(&OperatorSpec::ShiftMinusLambda(lambda), &a),
            );
            let xlen = rng.gen_range(1..=40);
            let x: Vec<BigRational> = (0..xlen).map(|_| sampling::rational(&mut rng, 20, 9)).collect();
            let q = OperatorSpec::AvgProject;
            let qd = apply_slice(&q, &apply_slice(&dl, &x));
            let dq = apply_slice(&dl, &apply_slice(&q, &x));
            usize::from(lhs != rhs) + usize::from(qd != dq)
        })
        .sum();
    Ok(outcome(fails == 0, format!("{fails} mismatches in 2 x 1000 exact comparisons"), "0 mismatches"))
}

fn c5() -> Result<Outcome> {
    let start = Instant::now();
    let params = IndexParams::default();
    let mut worst_lp = 0.0f64;
    let mut worst_f = 0.0f64;
    for p in [1.0, 1.5, 2.0, 3.0, 10.0] {
        let r = index_report(&SpaceSpec::lp(p)?, &params)?;
        worst_lp = worst_lp.max((r.alpha.point - 1.0 / p).abs()).max((r.beta.point - 1.0 / p).abs());
        worst_f = worst_f.max((r.f_interval[0].0 - p).abs() / p).max((r.f_interval[1].0 - p).abs() / p);
    }
    let mut worst_lor = 0.0f64;
    for (q, theta) in [(1.0, 0.3), (2.0, 0.25), (2.0, 0.4)] {
        let want = (1.0 - theta * q) / q;
        for route in [LorentzRoute::PartialSums, LorentzRoute::DyadicWeights] {
            let (a, b) = lorentz_indices(q, &power_weight(theta), params.n_max, params.j_max, route)?;
            worst_lor = worst_lor.max((a.point - want).abs()).max((b.point - want).abs());
        }
    }
    let mut worst_orl = 0.0f64;
    for p in [1.0, 1.5, 2.0, 3.0, 10.0] {
        let (a, b) = orlicz_indices(&OrliczFn::power(p)?, params.n_max, params.k_max)?;
        worst_orl = worst_orl.max((a.point - 1.0 / p).abs()).max((b.point - 1.0 / p).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(outcome(
        worst_lp <= 1e-6 && worst_f <= 1e-6 && worst_lor <= 1e-3 && worst_orl <= 1e-8 && secs < 60.0,
        format!(
            "lp error {worst_lp:.1e} (F rel {worst_f:.1e}), lorentz error {worst_lor:.1e} (both routes), orlicz error {worst_orl:.1e}, {secs:.1}s"
        ),
        "lp <= 1e-6, lorentz <= 1e-3, orlicz <= 1e-8, < 60 s",
    ))
}

/// Built-in spaces whose reports the ordering check covers.
pub fn report_variants() -> Vec<SpaceSpec> {
    let ok = "built-in space";
    let mut v: Vec<SpaceSpec> = [1.0, 1.5, 2.0, 3.0, 10.0, f64::INFINITY]
        .into_iter()
        .map(|p| SpaceSpec::lp(p).expect(ok))
        .collect();
    v.push(SpaceSpec::lpq(3.0, 2.0).expect(ok));
    v.push(SpaceSpec::lpq(4.0, 1.0).expect(ok));
    for (q, theta) in [(1.0, 0.3), (2.0, 0.25), (2.0, 0.4), (3.0, 0.1)] {
        v.push(SpaceSpec::lorentz(q, power_weight(theta)).expect(ok));
    }
    for p in [1.5, 2.0, 3.0] {
        v.push(SpaceSpec::orlicz(OrliczFn::power(p).expect(ok)));
    }
    v.push(SpaceSpec::orlicz(OrliczFn::power_log(2.0, 0.5).expect(ok)));
    v.push(SpaceSpec::orlicz(OrliczFn::power_log(3.0, 1.0).expect(ok)));
    v
}

fn c6() -> Result<Outcome> {
    let params = IndexParams::default();
    let spaces = report_variants();
    let reports = spaces
        .par_iter()
        .map(|s| index_report(s, &params))
        .collect::<Result<Vec<_>>>()?;
    let mut bad = Vec::new();
    let mut worst_gap = 0.0f64;
    for r in &reports {
        let ft = fundamental_type_check(r, 5e-3);
        worst_gap = worst_gap.max(ft.gaps.0.abs()).max(ft.gaps.1.abs());
        if !ordering_holds(r, 1e-6) || !ft.evidence {
            bad.push(r.space.clone());
        }
    }
    Ok(outcome(
        bad.is_empty(),
        format!("{} reports, largest gap {worst_gap:.1e}, failing: {bad:?}", reports.len()),
        "alpha <= mu <= nu <= beta (1e-6) and gaps < 5e-3 for every report",
    ))
}

/// Block means of `x`: the `E_X` coordinates of `Qx`.
fn block_means(x: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0u32;
    while (1usize << k) - 1 < x.len() {
        let lo = (1usize << k) - 1;
        let hi = ((1usize << (k + 1)) - 1).min(x.len());
        out.push(x[lo..hi].iter().sum::<f64>() / (1u64 << k) as f64);
        k += 1;
    }
    out
}

fn c7(seed: u64) -> Result<Outcome> {
    let mut worst_exp = 0.0f64;
    let mut worst_chain = f64::NEG_INFINITY;
    for p in [1.0, 2.0, 4.0] {
        let base = SpaceSpec::lp(p)?;
        let lat = LatticeSpec::EX { base: base.clone() };
        let e = shift_exponents(&lat, 16, 64)?;
        let kp = 2f64.powf(1.0 / p);
        worst_exp = worst_exp.max((e.k_plus - kp).abs()).max((e.k_minus - 1.0 / kp).abs());
        let sigma = |n: i64| 2f64.powf(n as f64 / p);
        // E_{ℓ^p} is ℓ^p with weights 2^{(k-1)/p}, so τ_m has norm 2^{m/p}
        let tau = |m: i64| 2f64.powf(m as f64 / p);
        for n in -4i64..=4 {
            worst_chain = worst_chain.max(rel_excess(sigma(n), tau(n + 1)));
        }
        let chain: f64 = (0..200u64)
            .into_par_iter()
            .map(|t| -> Result<f64> {
                let mut rng = sampling::rng(seed ^ 0x7, (p as u64) << 32 | t);
                let len = rng.gen_range(1..=12);
                let a: Vec<f64> = sampling::gaussian(&mut rng, len).iter().map(|v| v.abs()).collect();
                let na = lattice_norm(&lat, &Seq::new(a.clone())?)?;
                let mut w = f64::NEG_INFINITY;
                let ex = |v: &[f64]| norm_dyadic_blocks(&base, v);
                let xlen = sampling::length(&mut rng, 1 << 10);
                let x = sampling::decreasing(&mut rng, xlen);
                let nx = norm(&base, &Seq::new(x.clone())?)?;
                for n in 1i64..=4 {
                    let sh = |m: i64, v: &[f64]| apply_slice(&OperatorSpec::Shift(m), v);
                    // ‖τ_{±n} a‖ <= 2 ‖σ_{2^{±n}}‖ ‖a‖
                    w = w.max(rel_excess(ex(&sh(n, &a))?, 2.0 * sigma(n) * na));
                    w = w.max(rel_excess(ex(&sh(-n, &a))?, 2.0 * sigma(-n) * na));
                    // ‖σ_{2^n} x‖ <= ‖τ_{n+1} Q x‖ and ‖σ_{2^{-n}} x‖ <= ‖τ_{1-n} Q R_n x‖
                    let up = norm(&base, &Seq::from_finite(apply_slice(&OperatorSpec::DilateUp(1 << n), &x)))?;
                    w = w.max(rel_excess(up, ex(&sh(n + 1, &block_means(&x)))?));
                    let down = norm(&base, &Seq::from_finite(apply_slice(&OperatorSpec::DilateDown(1 << n), &x)))?;
                    let rn = apply_slice(&OperatorSpec::AvgProjectN(n as u32), &x);
                    w = w.max(rel_excess(down, ex(&sh(1 - n, &block_means(&rn)))?));
                    // the last step of each chain: ‖Q x‖ <= ‖x‖
                    w = w.max(rel_excess(ex(&block_means(&x))?, nx));
                }
                Ok(w)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        worst_chain = worst_chain.max(chain);
    }
    Ok(outcome(
        worst_exp <= 1e-6 && worst_chain <= 1e-12,
        format!("shift exponent error {worst_exp:.1e}, largest relative chain excess {worst_chain:.1e}"),
        "exponents within 1e-6; chains hold (excess <= 1e-12)",
    ))
}

fn c8() -> Result<Outcome> {
    let mut worst_vn = 0.0f64;
    for p in [1.0, 1.5, 2.0, 3.0, 4.0] {
        let space = SpaceSpec::lp(p)?;
        for e in 0..=10 {
            let n = 1usize << e;
            let r = doubling_witness_vn(&space, p, n, &Seq::unit(1))?;
            let want = (4.0 / n as f64).powf(1.0 / p);
            worst_vn = worst_vn.max((r.residual_raw - want).abs()).max((r.vector_stats.norm - 1.0).abs());
        }
    }
    let mut worst_d2 = 0.0f64;
    let mut worst_d3 = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut d3_example = String::new();
    for p in [1.0, 2.0, 3.0] {
        for n in 1..=10u32 {
            let r = q0_witness_un(p, n)?;
            let nf = n as f64;
            let d2 = (2f64.powf(1.0 / p) * nf.powf(-1.0 / p) - r.d2_residual).abs();
            let d3 = (3f64.powf(1.0 / p) * nf.powf(-1.0 / p) - r.d3_residual).abs();
            if d3 > worst_d3 {
                d3_example = format!("p={p} n={n}: d3 {:.6} vs stated {:.6}", r.d3_residual, 3f64.powf(1.0 / p) * nf.powf(-1.0 / p));
            }
            worst_d2 = worst_d2.max(d2);
            worst_d3 = worst_d3.max(d3);
            worst_norm = worst_norm.max((r.norm - 1.0).abs());
        }
    }
    Ok(outcome(
        worst_vn <= 1e-9 && worst_d2 <= 1e-10 && worst_d3 <= 1e-10 && worst_norm <= 1e-10,
        format!(
            "v_n error {worst_vn:.1e}; u_n: d2 error {worst_d2:.1e}, d3 error {worst_d3:.1e} ({d3_example}), norm error {worst_norm:.1e}"
        ),
        "v_n within 1e-9; d2 = 2^(1/p) n^(-1/p), d3 = 3^(1/p) n^(-1/p), ‖u_n‖ = 1 within 1e-10",
    ))
}

fn c9() -> Result<Outcome> {
    let start = Instant::now();
    let r = dilation_support_disjointness(4, 4)?;
    let secs = start.elapsed().as_secs_f64();
    let cards_ok = r
        .cardinalities
        .iter()
        .all(|((l, m), size)| *size == 2usize.pow(*l) * 3usize.pow(*m));
    Ok(outcome(
        r.holds && cards_ok && secs < 10.0,
        format!("holds {}, {} cardinalities exact {cards_ok}, counterexample {:?}, {secs:.2}s", r.holds, r.cardinalities.len(), r.counterexample),
        "disjoint, |support| = 2^l 3^m, < 10 s",
    ))
}

fn c10(seed: u64) -> Result<Outcome> {
    let identity_fail = (0..50u64)
        .into_par_iter()
        .map(|t| -> Result<usize> {
            let mut rng = sampling::rng(seed ^ 0xa, t);
            let lambda = sampling::positive_rational(&mut rng, 7, 5);
            let n = rng.gen_range(1..=8);
            let j = rng.gen_range(1..=6);
            let r = shift_witness_identity(&lambda, n, j)?;
            Ok(usize::from(!(r.identity_holds && r.lower_bound_holds && r.peak_matches)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    let (moment_fail, solve_fail) = (0..500u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = sampling::rng(seed ^ 0xb, t);
            let lambda = sampling::positive_rational(&mut rng, 9, 4);
            let len = rng.gen_range(1..=12);
            let a: Vec<BigRational> = (0..len).map(|_| sampling::rational(&mut rng, 20, 9)).collect();
            let b = apply_slice(&OperatorSpec::ShiftMinusLambda(lambda.clone()), &a);
            let m = moment_functional(&lambda, &b);
            let back = solve_t_lambda(&lambda, &b).map(trim);
            (usize::from(!m.is_zero()), usize::from(back.ok() != Some(trim(a))))
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(outcome(
        identity_fail + moment_fail + solve_fail == 0,
        format!("identity failures {identity_fail}/50, nonzero moments {moment_fail}/500, round-trip failures {solve_fail}/500"),
        "all exact",
    ))
}

/// Envelopes of the Lorentz equivalence observed on the first certified run
/// (seed [`EQUIVALENCE_SEED`], 200 trials, lengths up to 4096).
pub const LORENTZ_ENVELOPE_PINS: [(f64, f64, f64, f64); 2] = [
    (2.0, 0.25, 1.0, 1.206929606689),
    (1.0, 0.3, 1.0, 1.578071036595),
];
pub const EQUIVALENCE_SEED: u64 = 2024;

fn c11() -> Result<Outcome> {
    let mut orl = (f64::INFINITY, f64::NEG_INFINITY);
    for p in [1.0, 1.5, 2.0, 3.0] {
        let r = ex_equivalence_report(&Equivalence::Orlicz { n: OrliczFn::power(p)? }, 200, 1 << 12, EQUIVALENCE_SEED)?;
        orl = (orl.0.min(r.min_ratio), orl.1.max(r.max_ratio));
    }
    let mut lor = Vec::new();
    let mut lor_ok = true;
    for (q, theta, pin_lo, pin_hi) in LORENTZ_ENVELOPE_PINS {
        let r = ex_equivalence_report(&Equivalence::Lorentz { q, w: power_weight(theta) }, 200, 1 << 12, EQUIVALENCE_SEED)?;
        let inside = r.min_ratio >= 2f64.powf(-2.0 / q) - 1e-12 && r.max_ratio <= 4f64.powf(1.0 / q) + 1e-12;
        // pins carry 12 decimals
        let pinned = (r.min_ratio - pin_lo).abs() <= 1e-11 && (r.max_ratio - pin_hi).abs() <= 1e-11;
        lor_ok &= r.min_ratio.is_finite() && r.max_ratio.is_finite() && inside && pinned;
        lor.push(format!("(q={q},theta={theta}) [{:.12}, {:.12}]", r.min_ratio, r.max_ratio));
    }
    Ok(outcome(
        orl.0 >= 1.0 - 1e-10 && orl.1 <= 4.0 + 1e-10 && lor_ok,
        format!("orlicz ratios in [{:.12}, {:.12}]; lorentz {}", orl.0, orl.1, lor.join(", ")),
        "orlicz in [1 - 1e-10, 4 + 1e-10]; lorentz finite, inside [2^(-2/q), 4^(1/q)], equal to pinned envelopes",
    ))
}

fn c12(seed: u64) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [1.0, 1.5, 2.0, 3.0] {
        let l0 = 2f64.powf(1.0 / p);
        let step = 0.05;
        let grid: Vec<f64> = (-10..=10).map(|i| l0 + step * i as f64).filter(|l| *l > 0.0).collect();
        let rows = residual_scan(&SpaceSpec::lp(p)?, &grid, &ScanConfig::new(1 << 14, 4, seed))?;
        let best = rows
            .iter()
            .min_by(|a, b| a.residual_estimate.total_cmp(&b.residual_estimate))
            .expect("nonempty grid");
        let at = rows.iter().find(|r| r.lambda == l0).expect("grid contains 2^(1/p)");
        let witness = at.witness_residual.unwrap_or(f64::INFINITY);
        let off: Vec<f64> = rows
            .iter()
            .filter(|r| ((r.lambda - l0).abs() - 0.4).abs() < 1e-9)
            .map(|r| r.residual_estimate)
            .collect();
        let near = (best.lambda - l0).abs() <= step + 1e-12;
        let small = witness < 0.1;
        let far = off.iter().all(|v| *v > 5.0 * at.residual_estimate);
        ok &= near && small && far && !off.is_empty();
        parts.push(format!(
            "p={p}: argmin {:.3}, witness {:.4}, off-interval min {:.4}",
            best.lambda,
            witness,
            min_of(off.iter().copied())
        ));
    }
    Ok(outcome(
        ok,
        parts.join("; "),
        "argmin within 0.05 of 2^(1/p), witness < 0.1 at dim 2^14, estimates at 2^(1/p) ± 0.4 above 5x",
    ))
}

/// Runs criterion `id` (1 to 12).
pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let res = match id {
        1 => c1(seed),
        2 => c2(seed),
        3 => c3(seed),
        4 => c4(seed),
        5 => c5(),
        6 => c6(),
        7 => c7(seed),
        8 => c8(),
        9 => c9(),
        10 => c10(seed),
        11 => c11(),
        12 => c12(seed),
        _ => Ok(outcome(false, format!("no criterion {id}"), "1..=12")),
    };
    let o = res.unwrap_or_else(|e| outcome(false, format!("error: {e}"), "no error"));
    CriterionResult {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
        passed: o.passed,
        observed: o.observed,
        expected: o.expected,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// `all` or a comma-separated list of criterion numbers.
pub fn parse_suite(spec: &str) -> std::result::Result<Vec<u8>, String> {
    if spec.trim() == "all" {
        return Ok((1..=12).collect());
    }
    spec.split(',')
        .map(|s| match s.trim().parse::<u8>() {
            Ok(n) if (1..=12).contains(&n) => Ok(n),
            _ => Err(format!("bad criterion '{s}', expected 1..=12 or 'all'")),
        })
        .collect()
}

pub fn run_suite(ids: &[u8], seed: u64) -> Vec<CriterionResult> {
    ids.iter().map(|id| run_criterion(*id, seed)).collect()
}

pub fn format_line(r: &CriterionResult) -> String {
    format!(
        "[{}] {:>2} {}: {} (expected {}) {:.1}s",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.observed,
        r.expected,
        r.seconds
    )
}
