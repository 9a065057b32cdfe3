//! The right module M^J: the generator action case by case, and the product
//! D'(y) = m_e C'_{s1} ... C'_{sk} before any correction.
//!
//! cargo run --example parabolic_module

use std::sync::Arc;

use klq::coxeter::CoxeterSystem;
use klq::heckemod::{apply_cs, d_prime, CosetArena, ModuleVector};

fn show(sys: &CoxeterSystem, arena: &CosetArena, v: &ModuleVector) -> String {
    v.to_canonical(arena)
        .iter()
        .map(|(w, f)| format!("({f}) m[{}]", sys.format_word(w)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // B3 with J = {s1}
    let sys = Arc::new(CoxeterSystem::type_b(3, &[0])?);
    let mut arena = CosetArena::new(sys.clone());
    let e = ModuleVector::unit();
    for s in 0..sys.rank() {
        let v = apply_cs(&e, s, &mut arena)?;
        println!("m[e] C'_{} = {}", sys.label(s), show(&sys, &arena, &v));
    }

    for word in [vec![1, 0], vec![1, 2, 1, 0], vec![2, 1, 0, 2, 1]] {
        let (arena, v) = d_prime(sys.clone(), &word)?;
        println!("\nD'({}) has {} terms:", sys.format_word(&word), v.support_len());
        println!("  {}", show(&sys, &arena, &v));
    }
    Ok(())
}
