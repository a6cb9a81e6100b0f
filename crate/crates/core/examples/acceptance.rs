//! Runs the acceptance criteria and prints one line per criterion.
//! Pass criterion ids as arguments to run a subset.

use seqspace::acceptance::{format_line, parse_suite, run_suite, DEFAULT_SEED};

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "all".into());
    let ids = parse_suite(&arg).expect("criterion list like 1,2,5 or all");
    for r in run_suite(&ids, DEFAULT_SEED) {
        println!("{}", format_line(&r));
    }
}
