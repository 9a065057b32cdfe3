//! mu(e, y) for the affine A_n target attached to a dominant weight.
//!
//! cargo run --release --example affine_mu -- 5 3,4,4,4,3
//! With no arguments runs n = 4, weight (2,3,3,2). p defaults to n + 1.

use klq::affine_an::{guess_weight, run_case, Weight};
use klq::engine::EngineOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let nu: Weight = match args.next() {
        Some(s) => s.parse()?,
        None => guess_weight(n),
    };
    let p: i64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(n as i64 + 1);

    let threads = std::thread::available_parallelism().map_or(1, |t| t.get());
    let run = run_case(n, p, &nu, EngineOptions { threads, ..EngineOptions::default() })?;
    let sys = klq::affine_an::affine_system(n)?;

    println!("n = {n}, p = {p}, weight {nu}");
    println!("y = {}  (length {})", sys.format_word(&run.case.y_word), run.case.y_word.len());
    println!("P(e,y) = {}", run.p_e);
    println!("mu(e,y) = {}", run.mu);
    let st = &run.result.stats;
    println!(
        "interval {}, waves {}, corrections {}, {:.3}s",
        run.result.entries.len(),
        st.counters.waves,
        st.counters.corrections,
        st.elapsed.as_secs_f64()
    );
    for w in &st.wave_log {
        println!("  wave at length {:>3}: {:>5} offenders", w.length, w.offenders);
    }
    Ok(())
}
