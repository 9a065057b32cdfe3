//! Engine against oracle for every parabolic subset of a finite system.
//!
//! cargo run --example oracle_check -- B 3

use std::sync::Arc;

use klq::coxeter::{CartanType, CoxeterSystem};
use klq::oracle::compare_all;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let kind: CartanType = args.next().as_deref().unwrap_or("A").parse()?;
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let base = CoxeterSystem::named(kind, n, &[])?;

    let mut total = 0;
    for mask in 0..1u32 << n {
        let j: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sys = Arc::new(base.with_parabolic(&j)?);
        let reports = compare_all(sys.clone(), usize::MAX)?;
        let bad: Vec<_> = reports.iter().filter(|r| !r.matches()).collect();
        let labels: Vec<_> = j.iter().map(|&s| sys.label(s).to_string()).collect();
        println!("J = {{{}}}: {} targets, {} mismatches", labels.join(","), reports.len(), bad.len());
        for r in bad {
            println!("  y = {:?}: {}", r.y_word, r.divergence.as_deref().unwrap_or(""));
        }
        total += reports.len();
    }
    println!("{total} targets checked");
    Ok(())
}
