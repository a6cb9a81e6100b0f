//! Norms of one vector in each family of symmetric sequence spaces.

use seqspace::descriptor::parse_space;
use seqspace::spaces::{fundamental_function, norm};
use seqspace::Seq;

fn main() -> seqspace::Result<()> {
    let x = Seq::new(vec![3.0, -1.0, 0.5, 4.0, 0.0, 2.0])?;
    let spaces = [
        r#"{"kind":"lp","p":1}"#,
        r#"{"kind":"lp","p":2}"#,
        r#"{"kind":"lp","p":"inf"}"#,
        r#"{"kind":"lpq","p":3,"q":2}"#,
        r#"{"kind":"lpq","p":2,"q":"inf"}"#,
        r#"{"kind":"lorentz","q":2,"weights":{"form":"power","theta":0.25}}"#,
        r#"{"kind":"orlicz","orlicz":{"form":"power","p":3}}"#,
        r#"{"kind":"orlicz","orlicz":{"form":"power_log","p":2,"a":0.5}}"#,
    ];
    println!("x = {x}");
    for s in spaces {
        let sp = parse_space(s)?;
        println!(
            "{:<40} ||x|| = {:<20.15} phi(8) = {:.6}",
            sp.label(),
            norm(&sp, &x)?,
            fundamental_function(&sp, 8)?
        );
    }
    Ok(())
}
