//! The p-dilated dot action of affine A_n, and the coset representative y
//! with w0 y . (-2rho) equal to a given dominant weight.
//!
//! cargo run --example dot_action -- 4 2,3,3,2

use klq::affine_an::{
    affine_system, dot_apply_gen, dot_apply_word, enumerate_orbit, w0_dot, weight_to_y, Weight,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let nu: Weight = match args.next() {
        Some(s) => s.parse()?,
        None => klq::affine_an::guess_weight(n),
    };
    let p = n as i64 + 1;
    let sys = affine_system(n)?;

    let start = Weight::minus_two_rho(n);
    println!("-2rho = {start}, w0 . (-2rho) = {}", w0_dot(&start));
    for i in 0..=n {
        println!("  s{i} . {start} = {}", dot_apply_gen(n, p, i, &start));
    }

    let case = weight_to_y(&sys, n, p, &nu)?;
    println!("\nweight {nu}: y = {} (length {})", sys.format_word(&case.y_word), case.y_word.len());
    let image = dot_apply_word(n, p, &case.y_word, &start);
    println!("y . (-2rho) = {image}, w0 y . (-2rho) = {}", w0_dot(&image));

    let orbit = enumerate_orbit(&sys, n, p, case.y_word.len());
    let dominant: Vec<_> = orbit.iter().filter(|(_, w)| w.is_dominant()).collect();
    println!("\n{} dominant orbit weights up to length {}:", dominant.len(), case.y_word.len());
    for (x, w) in dominant {
        println!("  {w}  <-  {}", sys.format_word(&sys.canonical_word(x)));
    }
    Ok(())
}
