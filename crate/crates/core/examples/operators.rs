//! Coordinate operators and searched lower bounds for their norms.

use seqspace::operators::{apply, operator_norm_lower, spectral_radius_estimate, OperatorSpec, SearchConfig, Strategy};
use seqspace::spaces::SpaceSpec;
use seqspace::Seq;

fn main() -> seqspace::Result<()> {
    let x = Seq::new(vec![1.0, 2.0, 3.0])?;
    for op in ["sigma_up:2", "sigma_down:2", "tau:1", "doubling", "Q"] {
        let op: OperatorSpec = op.parse()?;
        println!("{op:<14} x = {}", apply(&op, &x));
    }

    let sp = SpaceSpec::lorentz(2.0, seqspace::spaces::WeightSeq::power(0.25)?)?;
    let cfg = SearchConfig::default();
    for m in [2usize, 4, 8] {
        let cert = operator_norm_lower(&sp, &OperatorSpec::DilateUp(m), 1024, Strategy::Optimize, &cfg)?;
        println!("||sigma_{m}|| on {} >= {:.6} ({} evaluations)", sp.label(), cert.value, cert.evaluations);
    }
    let r = spectral_radius_estimate(&sp, &OperatorSpec::Doubling, 6, 1 << 12, &cfg)?;
    println!("r(D) ~ {:.6} ({})", r.estimate, r.caveat);
    Ok(())
}
