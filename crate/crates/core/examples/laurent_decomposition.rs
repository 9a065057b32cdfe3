//! Splitting a Laurent coefficient into its bar-symmetric correction and the
//! strictly negative remainder, and converting back to q-polynomials.
//!
//! cargo run --example laurent_decomposition

use klq::laurent::{LaurentPoly, QPoly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = [
        LaurentPoly::from_terms([(1, 1), (-1, 1)]),
        LaurentPoly::from_terms([(2, 3), (0, 1), (-1, 4), (-3, 2)]),
        LaurentPoly::from_terms([(0, 2), (-2, 1)]),
    ];
    for f in &samples {
        let g = f.make_g();
        let rest = f.sub(&g);
        println!("f = {f}");
        println!("  g = {g}   bar(g) = g: {}", g.is_bar_symmetric());
        println!("  f - g = {rest}   strictly negative: {}", rest.is_strictly_negative());
    }

    // P(x,y) = 1 + q with l(y) - l(x) = 3 is t^-3 + t^-1 in normalized form
    let p = QPoly::from_i64s(&[1, 1]);
    let f = LaurentPoly::from_q_polynomial(&p, 3);
    println!("\nP = {p} at length difference 3 is {f}");
    println!("back to q: {}", f.to_q_polynomial(3)?);
    println!("mu = {}", f.mu_coefficient());
    Ok(())
}
