//! Sequence lattices built from dyadic samples, and how closely they
//! reproduce the Lorentz and Orlicz norms.

use seqspace::descriptor::parse_lattice;
use seqspace::lattices::{dyadic_decay_condition, ex_equivalence_report, lattice_norm, sandwich_ratio, shift_exponents, Equivalence};
use seqspace::spaces::{OrliczFn, SpaceSpec, WeightSeq};
use seqspace::Seq;

fn main() -> seqspace::Result<()> {
    let a = Seq::new(vec![1.0, 0.5, 0.25, 0.125])?;
    for l in [
        r#"{"kind":"ex","base":{"kind":"lp","p":2}}"#,
        r#"{"kind":"wlq","q":2,"mu":{"form":"geometric","ratio":1.5}}"#,
        r#"{"kind":"un","orlicz":{"form":"power","p":3}}"#,
    ] {
        let lat = parse_lattice(l)?;
        let s = shift_exponents(&lat, 12, 1 << 10)?;
        println!("{:<20} ||a|| = {:.6}  shift exponents: k+ = {:.6}, k- = {:.6}", lat.label(), lattice_norm(&lat, &a)?, s.k_plus, s.k_minus);
    }

    let x = Seq::new(vec![5.0, 4.0, 4.0, 1.0, 0.5, 0.5, 0.5, 0.1])?;
    println!("sandwich ratio in l^3: {:.6}", sandwich_ratio(&SpaceSpec::lp(3.0)?, &x)?);

    let w = WeightSeq::power(0.25)?;
    let c = dyadic_decay_condition(2.0, &w, 12, 1 << 10)?;
    println!("dyadic decay condition for q = 2, theta = 0.25: holds = {}, margin = {:.6}", c.holds, c.margin);
    for kind in [Equivalence::Lorentz { q: 2.0, w }, Equivalence::Orlicz { n: OrliczFn::power_log(2.0, 0.5)? }] {
        let r = ex_equivalence_report(&kind, 200, 256, 2024)?;
        println!("{:<8} ratio envelope over {} trials: [{:.6}, {:.6}]", r.kind, r.trials, r.min_ratio, r.max_ratio);
    }
    Ok(())
}
