//! The shift minus lambda on finitely supported sequences: its range, exact
//! inversion on that range, and the squared witness identity.

use num_rational::BigRational;
use seqspace::operators::{apply_slice, OperatorSpec};
use seqspace::scalar::ratio;
use seqspace::spectral::{moment_functional, shift_witness_identity, solve_t_lambda};

fn main() -> seqspace::Result<()> {
    let lambda = ratio(5, 3);
    let a: Vec<BigRational> = vec![ratio(1, 2), ratio(-2, 1), ratio(7, 5)];
    let b = apply_slice(&OperatorSpec::ShiftMinusLambda(lambda.clone()), &a);
    println!("T a = {:?}", b.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    println!("moment of T a = {}", moment_functional(&lambda, &b));
    let back = solve_t_lambda(&lambda, &b)?;
    println!("solved back: {:?}", back.iter().map(|v| v.to_string()).collect::<Vec<_>>());

    let not_in_range = vec![ratio(1, 1)];
    println!("solving T a = e_1: {}", solve_t_lambda(&lambda, &not_in_range).unwrap_err());

    for n in [1usize, 4, 10] {
        let r = shift_witness_identity(&lambda, n, 2)?;
        println!("n = {n:>2}: identity {}, lower bound {}, peak {:.6}", r.identity_holds, r.lower_bound_holds, r.peak_coefficient);
    }
    Ok(())
}
