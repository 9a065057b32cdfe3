//! Canonical basis element of S4 at y = s2 s1 s3 s2, computed by the
//! correction engine and cross-checked against the recursive oracle.
//!
//! cargo run --example s4_classical

use std::sync::Arc;

use klq::coxeter::CoxeterSystem;
use klq::engine::{compute_target, EngineOptions};
use klq::oracle::{build_table, oracle_result};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sys = Arc::new(CoxeterSystem::type_a(3, &[])?);
    let y = [1, 0, 2, 1];
    let r = compute_target(sys.clone(), &y, EngineOptions::default())?;

    println!("y = {}  (length {})", sys.format_word(&y), y.len());
    println!("{:<12} {:>3}  P(x,y)", "x", "l");
    for (w, e) in &r.entries {
        println!("{:<12} {:>3}  {}", sys.format_word(w), e.length, e.p);
    }
    println!(
        "waves {}, corrections {}",
        r.stats.counters.waves, r.stats.counters.corrections
    );

    let table = build_table(sys, y.len())?;
    let o = oracle_result(&table, &r.y)?;
    match o.first_divergence(&r) {
        None => println!("oracle agrees on all {} entries", r.entries.len()),
        Some(d) => println!("oracle disagrees: {d}"),
    }
    Ok(())
}
