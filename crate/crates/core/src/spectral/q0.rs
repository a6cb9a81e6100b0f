//! Sequences indexed by the rationals in `(0, 1)` and the two operators
//! `D_2 e_q = e_{q/2} + e_{(q+1)/2}`, `D_3 e_q = e_{q/3} + e_{(q+1)/3} + e_{(q+2)/3}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact rational with a positive denominator, always kept reduced.
pub type ExactRational = BigRational;

/// A key in `ℚ ∩ (0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q0Key(BigRational);

impl Q0Key {
    pub fn new(r: BigRational) -> Result<Self> {
        if r.is_positive() && r < BigRational::one() {
            Ok(Q0Key(r))
        } else {
            Err(Error::ParameterRange(format!("{r} is not in (0, 1)")))
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ParameterRange("zero denominator".into()));
        }
        Self::new(BigRational::new(num.into(), den.into()))
    }

    /// The starting index `1/6`.
    pub fn sixth() -> Self {
        Q0Key(BigRational::new(1.into(), 6.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Q0Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Q0Op {
    D2,
    D3,
}

impl Q0Op {
    pub fn base(self) -> u32 {
        match self {
            Q0Op::D2 => 2,
            Q0Op::D3 => 3,
        }
    }

    fn images(self, q: &BigRational) -> impl Iterator<Item = BigRational> + '_ {
        let b = BigInt::from(self.base());
        (0..self.base()).map(move |i| (q + BigRational::from_integer(i.into())) / BigRational::from_integer(b.clone()))
    }
}

/// Finitely supported real sequence on `ℚ ∩ (0, 1)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QSeq {
    entries: BTreeMap<Q0Key, f64>,
}

impl QSeq {
    pub fn unit(q: Q0Key) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(q, 1.0);
        QSeq { entries }
    }

    /// Adds `c e_q`, dropping the key if the coefficient cancels.
    pub fn add(&mut self, q: Q0Key, c: f64) {
        let v = self.entries.get(&q).copied().unwrap_or(0.0) + c;
        if v == 0.0 {
            self.entries.remove(&q);
        } else {
            self.entries.insert(q, v);
        }
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Q0Key, &f64)> {
        self.entries.iter()
    }

    pub fn get(&self, q: &Q0Key) -> f64 {
        self.entries.get(q).copied().unwrap_or(0.0)
    }

    pub fn scale(&self, c: f64) -> QSeq {
        QSeq { entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).filter(|(_, v)| *v != 0.0).collect() }
    }

    pub fn sub(&self, other: &QSeq) -> QSeq {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add(k.clone(), -v);
        }
        out
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.entries.values().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `D_2 x` or `D_3 x` in exact key arithmetic; coefficients on colliding keys add.
pub fn apply_q0(op: Q0Op, x: &QSeq) -> QSeq {
    let mut out = QSeq::default();
    for (q, c) in &x.entries {
        for k in op.images(&q.0) {
            out.add(Q0Key(k), *c);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessReport {
    pub holds: bool,
    /// `((l, m), support size)` for every pair checked.
    pub cardinalities: Vec<((u32, u32), usize)>,
    /// First collision: the key and the two `(l, m)` pairs that share it.
    pub counterexample: Option<(String, (u32, u32), (u32, u32))>,
}

/// Checks that `D_2^l D_3^m e_{1/6}` is a sum of `2^l 3^m` distinct unit
/// vectors for all `1 <= l <= l_max`, `1 <= m <= m_max`, and that these
/// supports are pairwise disjoint.
pub fn dilation_support_disjointness(l_max: u32, m_max: u32) -> Result<DisjointnessReport> {
    if l_max < 1 || m_max < 1 {
        return Err(Error::ParameterRange("l_max and m_max must be >= 1".into()));
    }
    let mut owner: HashMap<Q0Key, (u32, u32)> = HashMap::new();
    let mut cardinalities = Vec::new();
    let mut holds = true;
    let mut counterexample = None;
    let mut d3 = QSeq::unit(Q0Key::sixth());
    for m in 1..=m_max {
        d3 = apply_q0(Q0Op::D3, &d3);
        let mut x = d3.clone();
        for l in 1..=l_max {
            x = apply_q0(Q0Op::D2, &x);
            let expected = 2usize.pow(l) * 3usize.pow(m);
            cardinalities.push(((l, m), x.support_size()));
            if x.support_size() != expected || x.entries.values().any(|c| *c != 1.0) {
                holds = false;
            }
            for k in x.entries.keys() {
                if let Some(prev) = owner.insert(k.clone(), (l, m)) {
                    holds = false;
                    counterexample.get_or_insert((k.to_string(), prev, (l, m)));
                }
            }
        }
    }
    Ok(DisjointnessReport { holds, cardinalities, counterexample })
}

/// The arithmetic progression `{start + i step : 0 <= i < len}` of keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Run {
    start: BigRational,
    step: BigRational,
    len: u64,
}

impl Run {
    /// Support of `D_2^j D_3^k e_{1/6}`: `(1/6 + i) / (2^j 3^k)`.
    fn block(j: u32, k: u32) -> Run {
        let m = BigInt::from(2u64.pow(j)) * BigInt::from(3u64.pow(k));
        let len = m.to_u64().expect("block fits u64");
        Run {
            start: BigRational::new(1.into(), BigInt::from(6) * &m),
            step: BigRational::new(1.into(), m),
            len,
        }
    }

    fn apply(&self, op: Q0Op) -> Vec<Run> {
        let b = BigRational::from_integer(op.base().into());
        let step = &self.step / &b;
        // a run covering a full unit period maps onto one longer run
        if &self.step * BigRational::from_integer(self.len.into()) == BigRational::one() {
            return vec![Run { start: &self.start / &b, step, len: self.len * op.base() as u64 }];
        }
        op.images(&self.start)
            .map(|start| Run { start, step: step.clone(), len: self.len })
            .collect()
    }

    #[cfg(test)]
    fn keys(&self) -> impl Iterator<Item = Q0Key> + '_ {
        (0..self.len).map(|i| Q0Key(&self.start + &self.step * BigRational::from_integer(i.into())))
    }

    fn overlaps(&self, other: &Run) -> bool {
        let den = [&self.start, &self.step, &other.start, &other.step]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let int = |r: &BigRational| (r * BigRational::from_integer(den.clone())).to_integer();
        let (s1, h1, s2, h2) = (int(&self.start), int(&self.step), int(&other.start), int(&other.step));
        // i h1 - j h2 = s2 - s1 with 0 <= i < len1, 0 <= j < len2
        let c = &s2 - &s1;
        let eg = h1.extended_gcd(&h2);
        let g = eg.gcd;
        if !(&c % &g).is_zero() {
            return false;
        }
        let i0 = &eg.x * (&c / &g);
        let j0 = -&eg.y * (&c / &g);
        let (u, v) = (&h2 / &g, &h1 / &g);
        let ceil = |a: BigInt, b: &BigInt| -((-a).div_floor(b));
        let (l1, l2) = (BigInt::from(self.len - 1), BigInt::from(other.len - 1));
        let lo = ceil(-&i0, &u).max(ceil(-&j0, &v));
        let hi = (&l1 - &i0).div_floor(&u).min((&l2 - &j0).div_floor(&v));
        lo <= hi
    }
}

/// Formal sum `Σ m · 2^{-a/p} 3^{-b/p}` keyed by `(a, b)`, so equal terms
/// cancel exactly.
type Monomials = BTreeMap<(i64, i64), i64>;

fn add_monomials(into: &mut Monomials, from: &Monomials, sign: i64, shift: (i64, i64)) {
    for ((a, b), m) in from {
        let e = into.entry((a + shift.0, b + shift.1)).or_insert(0);
        *e += sign * m;
    }
    into.retain(|_, m| *m != 0);
}

/// `|Σ m 2^{-a/p} 3^{-b/p}|^p`.
fn monomials_pow(c: &Monomials, p: f64) -> f64 {
    if let [((a, b), m)] = c.iter().collect::<Vec<_>>().as_slice() {
        return (m.abs() as f64).powf(p) * 2f64.powi(-*a as i32) * 3f64.powi(-*b as i32);
    }
    c.iter()
        .map(|((a, b), m)| *m as f64 * 2f64.powf(-*a as f64 / p) * 3f64.powf(-*b as f64 / p))
        .sum::<f64>()
        .abs()
        .powf(p)
}

/// Sequence on `ℚ_0` stored as disjoint-or-equal arithmetic runs with
/// monomial coefficients.
#[derive(Clone, Debug, Default)]
pub(crate) struct RunSeq {
    runs: BTreeMap<Run, Monomials>,
}

impl RunSeq {
    fn add(&mut self, run: Run, c: &Monomials, sign: i64, shift: (i64, i64)) {
        let e = self.runs.entry(run.clone()).or_default();
        add_monomials(e, c, sign, shift);
        if e.is_empty() {
            self.runs.remove(&run);
        }
    }

    fn apply(&self, op: Q0Op) -> RunSeq {
        let mut out = RunSeq::default();
        for (r, c) in &self.runs {
            for img in r.apply(op) {
                out.add(img, c, 1, (0, 0));
            }
        }
        out
    }

    fn minus(&self, other: &RunSeq) -> RunSeq {
        let mut out = self.clone();
        for (r, c) in &other.runs {
            out.add(r.clone(), c, -1, (0, 0));
        }
        out
    }

    /// `Σ |c|^p len` over runs that must be pairwise disjoint.
    fn lp_pow(&self, p: f64) -> Result<f64> {
        let runs: Vec<_> = self.runs.iter().collect();
        for i in 0..runs.len() {
            for j in i + 1..runs.len() {
                if runs[i].0.overlaps(runs[j].0) {
                    return Err(Error::Unsupported("overlapping key runs".into()));
                }
            }
        }
        Ok(runs.iter().map(|(r, c)| monomials_pow(c, p) * r.len as f64).sum())
    }

    pub(crate) fn support_size(&self) -> u128 {
        self.runs.keys().map(|r| r.len as u128).sum()
    }

    #[cfg(test)]
    fn expand(&self, p: f64) -> QSeq {
        let mut out = QSeq::default();
        for (r, c) in &self.runs {
            let v: f64 = c
                .iter()
                .map(|((a, b), m)| *m as f64 * 2f64.powf(-*a as f64 / p) * 3f64.powf(-*b as f64 / p))
                .sum();
            for k in r.keys() {
                out.add(k, v);
            }
        }
        out
    }
}

/// `n^{2/p} u_n = Σ_{j,k <= n} 2^{-j/p} 3^{-k/p} D_2^j D_3^k e_{1/6}`.
pub(crate) fn un_runs(n: u32) -> RunSeq {
    let mut u = RunSeq::default();
    for j in 1..=n {
        for k in 1..=n {
            let mut c = Monomials::new();
            c.insert((j as i64, k as i64), 1);
            u.add(Run::block(j, k), &c, 1, (0, 0));
        }
    }
    u
}

/// Largest `n` accepted by [`q0_witness_un`].
pub const UN_MAX_N: u32 = 12;

#[derive(Clone, Debug, Serialize)]
pub struct UnReport {
    pub p: f64,
    pub n: u32,
    /// `‖2^{-1/p} D_2 u_n - u_n‖_p`
    pub d2_residual: f64,
    /// `‖3^{-1/p} D_3 u_n - u_n‖_p`
    pub d3_residual: f64,
    pub norm: f64,
    /// `(2/n)^{1/p}`, the exact value of both residuals.
    pub predicted_d2: f64,
    pub predicted_d3: f64,
    pub support_size: u128,
}

/// Builds the two-operator witness `u_n` and measures how far it is from
/// being a common eigenvector of `2^{-1/p} D_2` and `3^{-1/p} D_3`.
pub fn q0_witness_un(p: f64, n: u32) -> Result<UnReport> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::ParameterRange(format!("p must be in [1, inf), got {p}")));
    }
    if n < 1 || n > UN_MAX_N {
        return Err(Error::DimensionCap { what: "witness size n", needed: n as u128, cap: UN_MAX_N as u128 });
    }
    let u = un_runs(n);
    let scale = (n as f64).powi(-2);
    let norm = (u.lp_pow(p)? * scale).powf(1.0 / p);
    // 2^{-1/p} D_2 u - u: shifting the exponent of 2 by one is the factor 2^{-1/p}
    let r2 = shift_all(&u.apply(Q0Op::D2), (1, 0)).minus(&u);
    let r3 = shift_all(&u.apply(Q0Op::D3), (0, 1)).minus(&u);
    let nf = n as f64;
    Ok(UnReport {
        p,
        n,
        d2_residual: (r2.lp_pow(p)? * scale).powf(1.0 / p),
        d3_residual: (r3.lp_pow(p)? * scale).powf(1.0 / p),
        norm,
        predicted_d2: (2.0 / nf).powf(1.0 / p),
        predicted_d3: (2.0 / nf).powf(1.0 / p),
        support_size: u.support_size(),
    })
}

fn shift_all(x: &RunSeq, shift: (i64, i64)) -> RunSeq {
    let mut out = RunSeq::default();
    for (r, c) in &x.runs {
        out.add(r.clone(), c, 1, shift);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(n: i64, d: i64) -> Q0Key {
        Q0Key::from_ratio(n, d).unwrap()
    }

    #[test]
    fn operator_examples() {
        let x = apply_q0(Q0Op::D3, &QSeq::unit(Q0Key::sixth()));
        let want: Vec<Q0Key> = vec![key(1, 18), key(7, 18), key(13, 18)];
        assert_eq!(x.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>(), want);
        let y = apply_q0(Q0Op::D2, &QSeq::unit(key(1, 2)));
        assert_eq!(y.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>(), vec![key(1, 4), key(3, 4)]);
        let z = apply_q0(Q0Op::D2, &x);
        assert_eq!(z.support_size(), 6);
        assert!(z.iter().all(|(_, c)| *c == 1.0));
    }

    #[test]
    fn keys_validated() {
        assert!(Q0Key::from_ratio(1, 1).is_err());
        assert!(Q0Key::from_ratio(0, 3).is_err());
        assert_eq!(key(2, 4), key(1, 2));
    }

    #[test]
    fn disjointness_small() {
        let r = dilation_support_disjointness(3, 2).unwrap();
        assert!(r.holds);
        let c = r.cardinalities.iter().find(|(lm, _)| *lm == (3, 2)).unwrap().1;
        assert_eq!(c, 72);
    }

    #[test]
    fn runs_match_explicit_blocks() {
        for (j, k) in [(1, 1), (2, 1), (1, 3)] {
            let mut x = QSeq::unit(Q0Key::sixth());
            for _ in 0..k {
                x = apply_q0(Q0Op::D3, &x);
            }
            for _ in 0..j {
                x = apply_q0(Q0Op::D2, &x);
            }
            let r = Run::block(j, k);
            let keys: Vec<Q0Key> = r.keys().collect();
            assert_eq!(keys, x.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn overlap_detection() {
        let a = Run::block(1, 1);
        let b = Run::block(2, 1);
        assert!(!a.overlaps(&b));
        assert!(a.overlaps(&a));
        // {1/12 + i/2} vs {7/12}: second element of a
        let c = Run { start: BigRational::new(7.into(), 12.into()), step: BigRational::one(), len: 1 };
        let a2 = Run { start: BigRational::new(1.into(), 12.into()), step: BigRational::new(1.into(), 2.into()), len: 2 };
        assert!(a2.overlaps(&c));
        let a1 = Run { len: 1, ..a2.clone() };
        assert!(!a1.overlaps(&c));
    }

    #[test]
    fn run_witness_matches_explicit_expansion() {
        for p in [1.0, 2.0, 3.0] {
            for n in 1..=3u32 {
                let u = un_runs(n);
                let ux = u.expand(p).scale((n as f64).powf(-2.0 / p));
                let d2 = apply_q0(Q0Op::D2, &ux).scale(2f64.powf(-1.0 / p)).sub(&ux);
                let d3 = apply_q0(Q0Op::D3, &ux).scale(3f64.powf(-1.0 / p)).sub(&ux);
                let r = q0_witness_un(p, n).unwrap();
                assert!((ux.lp_norm(p) - r.norm).abs() < 1e-12);
                assert!((d2.lp_norm(p) - r.d2_residual).abs() < 1e-12, "p={p} n={n}");
                assert!((d3.lp_norm(p) - r.d3_residual).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn witness_examples() {
        let r = q0_witness_un(2.0, 4).unwrap();
        assert!((r.d2_residual - 0.5f64.sqrt()).abs() < 1e-10);
        let r = q0_witness_un(1.0, 9).unwrap();
        // both boundary sums carry n disjoint blocks of unit mass, so 2/n and not 3/n
        assert!((r.d3_residual - 2.0 / 9.0).abs() < 1e-10);
        assert!((r.norm - 1.0).abs() < 1e-10);
        assert!(q0_witness_un(2.0, 13).is_err());
    }
}
