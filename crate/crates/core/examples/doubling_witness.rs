//! Approximate eigenvectors of the doubling operator and a residual scan
//! across lambda.

use seqspace::spaces::{SpaceSpec, WeightSeq};
use seqspace::spectral::{doubling_witness_vn, parse_grid, residual_scan, ScanConfig};
use seqspace::Seq;

fn main() -> seqspace::Result<()> {
    let l2 = SpaceSpec::lp(2.0)?;
    for n in [4usize, 64, 1024, 1 << 14] {
        let r = doubling_witness_vn(&l2, 2.0, n, &Seq::unit(1))?;
        println!("n = {n:>6}  residual = {:.3e}  predicted = {:.3e}", r.residual, r.predicted.unwrap_or(f64::NAN));
    }

    let sp = SpaceSpec::lorentz(2.0, WeightSeq::power(0.25)?)?;
    let rows = residual_scan(&sp, &parse_grid("1:2.5:7")?, &ScanConfig::new(1 << 10, 2, 7))?;
    println!("\nscan in {}", sp.label());
    for r in rows {
        println!("lambda = {:.3}  residual <= {:.6}  ({})", r.lambda, r.residual_estimate, r.method);
    }
    Ok(())
}
