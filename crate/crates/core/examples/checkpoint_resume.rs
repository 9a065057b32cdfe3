//! Interrupt a run after a few waves, resume from the checkpoint, and compare
//! with an uninterrupted run.
//!
//! cargo run --example checkpoint_resume

use std::sync::Arc;

use klq::affine_an::{affine_system, weight_to_y, Weight};
use klq::engine::{compute_target, resume_target, CheckpointPolicy, EngineOptions};
use klq::error::KlError;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sys = Arc::new(affine_system(5)?);
    let case = weight_to_y(&sys, 5, 6, &Weight(vec![3, 4, 4, 4, 3]))?;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("run.ckpt.json");

    let opts = EngineOptions {
        checkpoint: Some(CheckpointPolicy::new(&path)),
        halt_after_waves: Some(5),
        ..EngineOptions::default()
    };
    match compute_target(sys.clone(), &case.y_word, opts) {
        Err(KlError::Halted { wave }) => println!("stopped after wave {wave}"),
        other => return Err(format!("expected a halt, got {:?}", other.map(|_| ())).into()),
    }
    println!("checkpoint: {} bytes", std::fs::metadata(&path)?.len());

    let resumed = resume_target(sys.clone(), &case.y_word, &path, EngineOptions::default())?;
    let fresh = compute_target(sys, &case.y_word, EngineOptions::default())?;
    println!(
        "resumed: mu = {}, {} corrections over {} waves",
        resumed.mu_of(&[]),
        resumed.stats.counters.corrections,
        resumed.stats.counters.waves
    );
    match fresh.first_divergence(&resumed) {
        None => println!("identical to the uninterrupted run"),
        Some(d) => println!("differs: {d}"),
    }
    Ok(())
}
