//! The shift `τ_1` on sequence lattices: the moment functional annihilating
//! `Im T_λ`, inversion of `T_λ` on its range, and the witness identity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{apply_slice, OperatorSpec};
use crate::scalar::{trim, Scalar};

/// `Σ_{k>=1} λ^k a_k`.
pub fn moment_functional<S: Scalar>(lambda: &S, a: &[S]) -> S {
    let mut pow = lambda.clone();
    let mut acc = S::zero();
    for v in a {
        acc = acc + pow.clone() * v.clone();
        pow = pow * lambda.clone();
    }
    acc
}

fn moment_scale<S: Scalar>(lambda: &S, a: &[S]) -> f64 {
    let l = lambda.to_f64();
    a.iter()
        .enumerate()
        .map(|(k, v)| (l.powi(k as i32 + 1) * v.to_f64()).abs())
        .sum()
}

/// The finitely supported `a` with `T_λ a = b`.
///
/// Runs `a_1 = -b_1/λ`, `a_k = (a_{k-1} - b_k)/λ`. Exact scalars require a
/// vanishing moment; floats accept a moment within `1e-10` of the sum of the
/// absolute moment terms.
pub fn solve_t_lambda<S: Scalar>(lambda: &S, b: &[S]) -> Result<Vec<S>> {
    if !lambda.is_positive() {
        return Err(Error::ParameterRange("lambda must be > 0".into()));
    }
    let b = trim(b.to_vec());
    if b.is_empty() {
        return Ok(Vec::new());
    }
    let moment = moment_functional(lambda, &b);
    let scale = moment_scale(lambda, &b);
    let in_range = if S::is_exact() {
        moment.is_zero()
    } else {
        moment.to_f64().abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE)
    };
    if !in_range {
        return Err(Error::NotInRange { moment: moment.to_f64() });
    }
    let mut a = Vec::with_capacity(b.len() - 1);
    let mut prev = S::zero();
    for bk in &b[..b.len() - 1] {
        prev = (prev - bk.clone()) / lambda.clone();
        a.push(prev.clone());
    }
    let a = trim(a);
    let back = trim(apply_slice(&OperatorSpec::ShiftMinusLambda(lambda.clone()), &a));
    let tol = 1e-10 * b.iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
    let ok = back.len() <= b.len()
        && b.iter().enumerate().all(|(i, bi)| {
            let ai = back.get(i).cloned().unwrap_or_else(S::zero);
            if S::is_exact() {
                ai == *bi
            } else {
                (ai.to_f64() - bi.to_f64()).abs() <= tol
            }
        });
    if !ok {
        return Err(Error::NotInRange { moment: moment.to_f64() });
    }
    Ok(a)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftIdentityReport {
    /// `T_λ^2 a = λ^2 e_j - 2λ^{1-n} e_{j+n+1} + λ^{-2n} e_{j+2n+2}`.
    pub identity_holds: bool,
    /// `a >= n λ^{-n} e_{j+n}` entrywise.
    pub lower_bound_holds: bool,
    /// Coefficient of `e_{j+n}` in `a`; equals `(n+1) λ^{-n}`.
    pub peak_coefficient: f64,
    pub peak_matches: bool,
}

/// Builds `a = (I + λ^{-1}τ_1 + ... + λ^{-n}τ_1^n)^2 e_j` and checks the
/// expansion of `T_λ^2 a`. Exact for rational `λ`; floats use `1e-10`.
pub fn shift_witness_identity<S: Scalar>(lambda: &S, n: usize, j: usize) -> Result<ShiftIdentityReport> {
    if !lambda.is_positive() {
        return Err(Error::ParameterRange("lambda must be > 0".into()));
    }
    if n < 1 || j < 1 {
        return Err(Error::ParameterRange("n and j must be >= 1".into()));
    }
    let inv = S::one() / lambda.clone();
    // profile c_i = λ^{-i}, i = 0..=n
    let mut prof = Vec::with_capacity(n + 1);
    let mut c = S::one();
    for _ in 0..=n {
        prof.push(c.clone());
        c = c * inv.clone();
    }
    let mut a = vec![S::zero(); j + 2 * n];
    for (i, ci) in prof.iter().enumerate() {
        for (k, ck) in prof.iter().enumerate() {
            let idx = j - 1 + i + k;
            a[idx] = a[idx].clone() + ci.clone() * ck.clone();
        }
    }
    let t = OperatorSpec::ShiftMinusLambda(lambda.clone());
    let got = trim(apply_slice(&t, &apply_slice(&t, &a)));

    let mut want = vec![S::zero(); j + 2 * n + 2];
    want[j - 1] = lambda.clone() * lambda.clone();
    let n_i = n as i32;
    want[j + n] = -(S::from_usize(2) * lambda.powi(1 - n_i));
    want[j + 2 * n + 1] = lambda.powi(-2 * n_i);
    let want = trim(want);

    let identity_holds = got.len() == want.len()
        && got.iter().zip(&want).all(|(g, w)| g.close_to(w, 1e-10));
    let floor = S::from_usize(n) * lambda.powi(-n_i);
    let peak = a[j + n - 1].clone();
    let slack = if S::is_exact() { 0.0 } else { 1e-10 };
    let lower_bound_holds = a.iter().all(|v| v.to_f64() >= -slack)
        && peak.to_f64() >= floor.to_f64() - slack * floor.to_f64().abs()
        && (!S::is_exact() || peak >= floor);
    let expected_peak = S::from_usize(n + 1) * lambda.powi(-n_i);
    Ok(ShiftIdentityReport {
        identity_holds,
        lower_bound_holds,
        peak_coefficient: peak.to_f64(),
        peak_matches: peak.close_to(&expected_peak, 1e-10),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_traits::Zero;
    use num_rational::BigRational;

    #[test]
    fn identity_examples() {
        let r = shift_witness_identity(&ratio(1, 1), 2, 1).unwrap();
        assert!(r.identity_holds && r.lower_bound_holds && r.peak_matches);
        let r = shift_witness_identity(&ratio(3, 2), 5, 3).unwrap();
        assert!(r.identity_holds && r.lower_bound_holds && r.peak_matches);
        let r = shift_witness_identity(&1.7f64, 6, 2).unwrap();
        assert!(r.identity_holds && r.peak_matches);
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment_functional(&2.0, &[1.0]), 2.0);
        let l = ratio(5, 3);
        // e_{n+1} - λ^n e_1 with n = 3
        let mut b = vec![BigRational::from_integer(0.into()); 4];
        b[0] = -l.powi(3);
        b[3] = ratio(1, 1);
        assert!(moment_functional(&l, &b).is_zero());
    }

    #[test]
    fn solve_examples() {
        let l = ratio(7, 4);
        // b = e_3 - λ^2 e_1 gives a = (λ, 1)
        let b = vec![-(l.clone() * l.clone()), ratio(0, 1), ratio(1, 1)];
        let a = solve_t_lambda(&l, &b).unwrap();
        assert_eq!(a, vec![l.clone(), ratio(1, 1)]);
        assert!(matches!(solve_t_lambda(&l, &[ratio(1, 1)]), Err(Error::NotInRange { .. })));
        assert!(solve_t_lambda(&2.0, &[1.0]).is_err());
        let a = solve_t_lambda(&1.3, &apply_slice(&OperatorSpec::ShiftMinusLambda(1.3), &[0.5, -2.0, 1.0])).unwrap();
        for (x, y) in a.iter().zip([0.5, -2.0, 1.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
