//! Boyd and fundamental indices, and the interval of exponents p.

use seqspace::indices::{index_report, ordering_holds, IndexParams};
use seqspace::spaces::{OrliczFn, SpaceSpec, WeightSeq};

fn main() -> seqspace::Result<()> {
    let params = IndexParams::default();
    let spaces = vec![
        SpaceSpec::lp(3.0)?,
        SpaceSpec::lpq(2.0, 4.0)?,
        SpaceSpec::lorentz(2.0, WeightSeq::power(0.25)?)?,
        SpaceSpec::lorentz(1.0, WeightSeq::power(0.3)?)?,
        SpaceSpec::orlicz(OrliczFn::power_log(2.0, 0.5)?),
    ];
    println!("{:<36} {:>9} {:>9} {:>9} {:>9}   [p_min, p_max]", "space", "alpha", "beta", "mu", "nu");
    for sp in spaces {
        let r = index_report(&sp, &params)?;
        println!(
            "{:<36} {:>9.6} {:>9.6} {:>9.6} {:>9.6}   [{:.4}, {:.4}]  ordered: {}",
            r.space,
            r.alpha.point,
            r.beta.point,
            r.mu,
            r.nu,
            r.f_interval[0].0,
            r.f_interval[1].0,
            ordering_holds(&r, 1e-9)
        );
    }
    Ok(())
}
