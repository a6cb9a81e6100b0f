use seqspace::indices::{index_report, lorentz_indices, IndexParams, LorentzRoute};
use seqspace::spaces::{fundamental_function, OrliczFn, SpaceSpec, WeightSeq};
use seqspace::spectral::{doubling_witness_vn, q0_witness_un, residual_scan, ScanConfig};
use seqspace::Seq;

#[test]
fn lp_indices_are_one_over_p() {
    for p in [1.0, 1.5, 2.0, 4.0] {
        let r = index_report(&SpaceSpec::lp(p).unwrap(), &IndexParams::default()).unwrap();
        for v in [r.alpha.point, r.beta.point, r.mu, r.nu] {
            assert!((v - 1.0 / p).abs() < 1e-12, "p = {p}: {v}");
        }
    }
}

#[test]
fn lp_fundamental_function() {
    let sp = SpaceSpec::lp(3.0).unwrap();
    for n in [1usize, 7, 1000] {
        let want = (n as f64).powf(1.0 / 3.0);
        assert!((fundamental_function(&sp, n).unwrap() - want).abs() < 1e-12 * want);
    }
}

#[test]
fn power_lorentz_indices() {
    // w_k = k^{-θ}: both indices are 1/q - θ
    let w = WeightSeq::power(0.25).unwrap();
    for route in [LorentzRoute::PartialSums, LorentzRoute::DyadicWeights] {
        let (a, b) = lorentz_indices(2.0, &w, 16, 1 << 14, route).unwrap();
        assert!((a.point - 0.25).abs() < 1e-3 && (b.point - 0.25).abs() < 1e-3, "{route:?}: {a:?} {b:?}");
    }
}

#[test]
fn orlicz_power_matches_lp() {
    let r = index_report(&SpaceSpec::orlicz(OrliczFn::power(3.0).unwrap()), &IndexParams::default()).unwrap();
    assert!((r.alpha.point - 1.0 / 3.0).abs() < 1e-6 && (r.beta.point - 1.0 / 3.0).abs() < 1e-6);
}

#[test]
fn vn_residual_is_closed_form_in_lp() {
    // both boundary blocks carry p-mass 2, so the residual is (4/n)^{1/p}
    for (p, n) in [(1.0, 16usize), (2.0, 256), (3.0, 1 << 12)] {
        let r = doubling_witness_vn(&SpaceSpec::lp(p).unwrap(), p, n, &Seq::unit(1)).unwrap();
        let want = r.predicted.unwrap();
        assert!((r.residual - want).abs() < 1e-12, "p = {p}, n = {n}: {} vs {want}", r.residual);
        assert!((want - (4.0 / n as f64).powf(1.0 / p)).abs() < 1e-12);
    }
}

#[test]
fn un_residuals_are_two_over_n() {
    for (p, n) in [(1.0, 1u32), (2.0, 5), (3.0, 9)] {
        let r = q0_witness_un(p, n).unwrap();
        let want = (2.0 / n as f64).powf(1.0 / p);
        assert!((r.d2_residual - want).abs() < 1e-12 && (r.d3_residual - want).abs() < 1e-12);
        assert!((r.norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn scan_finds_the_spectral_circle_in_l2() {
    let rows = residual_scan(&SpaceSpec::lp(2.0).unwrap(), &[2f64.sqrt(), 3.0], &ScanConfig::new(1 << 12, 2, 7)).unwrap();
    assert!(rows[0].residual_estimate < 0.05, "{:?}", rows[0]);
    assert!(rows[1].residual_estimate > 0.5, "{:?}", rows[1]);
}
