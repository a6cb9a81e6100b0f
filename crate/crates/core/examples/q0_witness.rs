//! The dilations D_2 and D_3 on sequences indexed by the rationals in (0, 1),
//! in exact arithmetic.

use seqspace::spectral::{apply_q0, dilation_support_disjointness, q0_witness_un, Q0Key, Q0Op, QSeq};

fn main() -> seqspace::Result<()> {
    let e = QSeq::unit(Q0Key::sixth());
    let image = apply_q0(Q0Op::D3, &apply_q0(Q0Op::D2, &e));
    let keys: Vec<String> = image.iter().map(|(k, _)| k.value().to_string()).collect();
    println!("D_3 D_2 e_(1/6) is supported on {{{}}}", keys.join(", "));

    let l = dilation_support_disjointness(4, 3)?;
    println!("supports of D_2^l D_3^m e_(1/6), l <= 4, m <= 3, pairwise disjoint: {}", l.holds);

    for (p, n) in [(1.0, 4u32), (2.0, 8), (3.0, 12)] {
        let r = q0_witness_un(p, n)?;
        println!(
            "p = {p}, n = {n:>2}: residuals D_2 {:.6}, D_3 {:.6} (exact (2/n)^(1/p) = {:.6}), {} support points",
            r.d2_residual, r.d3_residual, r.predicted_d3, r.support_size
        );
    }
    Ok(())
}
