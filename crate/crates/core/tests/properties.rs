use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use seqspace::acceptance::{all_variants, normed_variants};
use seqspace::operators::{apply, apply_slice, OperatorSpec};
use seqspace::seq::rearrange;
use seqspace::spaces::{norm, SpaceSpec};
use seqspace::spectral::{moment_functional, solve_t_lambda};
use seqspace::Seq;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-8.0f64..8.0, 1..max_len)
}

fn rationals(max_len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-20i64..20, 1i64..7), 1..max_len)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn lambda() -> impl Strategy<Value = BigRational> {
    (1i64..30, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn seq(v: Vec<f64>) -> Seq {
    Seq::new(v).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn avg_project_is_a_projection(x in rationals(40)) {
        let q = OperatorSpec::AvgProject;
        let once = apply_slice(&q, &x);
        prop_assert_eq!(apply_slice(&q, &once), once);
    }

    #[test]
    fn block_embed_intertwines_shift_and_doubling(a in rationals(9), l in lambda()) {
        // D_λ S = S T_λ
        let s = OperatorSpec::BlockEmbed;
        let lhs = apply_slice(&OperatorSpec::DoublingMinusLambda(l.clone()), &apply_slice(&s, &a));
        let rhs = apply_slice(&s, &apply_slice(&OperatorSpec::ShiftMinusLambda(l), &a));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn avg_project_commutes_with_doubling(x in rationals(40), l in lambda()) {
        let q = OperatorSpec::AvgProject;
        let d = OperatorSpec::DoublingMinusLambda(l);
        prop_assert_eq!(apply_slice(&q, &apply_slice(&d, &x)), apply_slice(&d, &apply_slice(&q, &x)));
    }

    #[test]
    fn doubling_inverse_undoes_doubling(x in rationals(40)) {
        let dx = apply_slice(&OperatorSpec::Doubling, &x);
        let back = apply_slice(&OperatorSpec::DoublingInverse, &dx);
        prop_assert_eq!(back, seqspace::scalar::trim(x));
    }

    #[test]
    fn dilation_commutes_with_rearrangement(x in coeffs(30), m in 1usize..6) {
        let up = OperatorSpec::DilateUp(m);
        let x = seq(x);
        prop_assert_eq!(rearrange(&apply(&up, &x)), apply(&up, &rearrange(&x)));
    }

    #[test]
    fn rearrangement_is_idempotent(x in coeffs(40)) {
        let once = rearrange(&seq(x));
        prop_assert!(once.is_decreasing_nonneg());
        prop_assert_eq!(rearrange(&once), once);
    }

    #[test]
    fn solve_inverts_shift_minus_lambda(a in rationals(12), l in lambda()) {
        let a = seqspace::scalar::trim(a);
        let b = apply_slice(&OperatorSpec::ShiftMinusLambda(l.clone()), &a);
        prop_assert!(num_traits::Zero::is_zero(&moment_functional(&l, &b)));
        prop_assert_eq!(solve_t_lambda(&l, &b).unwrap(), a);
    }

    #[test]
    fn lp_norm_matches_closed_form(x in coeffs(50), p in 1.0f64..6.0) {
        let want = x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p);
        let got = norm(&SpaceSpec::lp(p).unwrap(), &seq(x)).unwrap();
        prop_assert!(close(got, want, 1e-12), "{} vs {}", got, want);
    }

    #[test]
    fn lp_dilation_scales_by_m_to_one_over_p(x in coeffs(30), p in 1.0f64..6.0, m in 1usize..9) {
        let sp = SpaceSpec::lp(p).unwrap();
        let x = seq(x);
        let lhs = norm(&sp, &apply(&OperatorSpec::DilateUp(m), &x)).unwrap();
        let rhs = (m as f64).powf(1.0 / p) * norm(&sp, &x).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn lp_doubling_chain(x in coeffs(20), p in 1.0f64..6.0, n in 1u32..5) {
        // D^n acts on l^p as an isometry times 2^{n/p}, exactly like σ_{2^n}
        let sp = SpaceSpec::lp(p).unwrap();
        let x = seq(x);
        let dn = norm(&sp, &apply(&OperatorSpec::Doubling.power(n), &x)).unwrap();
        let sn = norm(&sp, &apply(&OperatorSpec::DilateUp(1 << n), &x)).unwrap();
        prop_assert!(close(dn, sn, 1e-12));
    }

    #[test]
    fn norms_are_symmetric_and_homogeneous(x in coeffs(30), c in -4.0f64..4.0, rot in 0usize..30) {
        let x = seq(x);
        let mut perm: Vec<usize> = (0..x.len()).collect();
        perm.rotate_left(rot % x.len().max(1));
        perm.reverse();
        for sp in all_variants() {
            let base = norm(&sp, &x).unwrap();
            let permuted = norm(&sp, &x.permute(&perm)).unwrap();
            prop_assert!(close(base, permuted, 1e-9), "{}: {} vs {}", sp.label(), base, permuted);
            let scaled = norm(&sp, &x.scale(c)).unwrap();
            prop_assert!(close(scaled, c.abs() * base, 1e-9), "{}", sp.label());
            prop_assert!(close(base, norm(&sp, &rearrange(&x)).unwrap(), 1e-9));
        }
    }

    #[test]
    fn norms_are_monotone(x in coeffs(30), shrink in prop::collection::vec(0.0f64..1.0, 30)) {
        let x = seq(x);
        let y = seq(x.as_slice().iter().zip(&shrink).map(|(a, s)| a * s).collect());
        for sp in all_variants() {
            let (nx, ny) = (norm(&sp, &x).unwrap(), norm(&sp, &y).unwrap());
            prop_assert!(ny <= nx * (1.0 + 1e-9), "{}: {} > {}", sp.label(), ny, nx);
        }
    }

    #[test]
    fn triangle_inequality(x in coeffs(30), y in coeffs(30)) {
        let (x, y) = (seq(x), seq(y));
        let s = x.add(&y);
        for sp in normed_variants() {
            let lhs = norm(&sp, &s).unwrap();
            let rhs = norm(&sp, &x).unwrap() + norm(&sp, &y).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{}: {} > {}", sp.label(), lhs, rhs);
        }
    }
}
