//! Which moduli a form is onto.
//!
//! Run with `cargo run --example surjectivity`.

use congruence_images::cli::parse_poly;
use congruence_images::Engine;

fn main() -> congruence_images::Result<()> {
    let engine = Engine::default();
    for text in ["x^2+y^2", "x^2+y^2+z^2", "x^2-y^2", "x^2+y^2-z^2", "x^3+y^3", "x^2+2y^2"] {
        let f = parse_poly(text)?.parsed;
        let misses: Vec<u64> = (1..=64)
            .map(|n| engine.is_surjective(&f, n).map(|onto| (n, onto)))
            .collect::<congruence_images::Result<Vec<_>>>()?
            .into_iter()
            .filter(|&(_, onto)| !onto)
            .map(|(n, _)| n)
            .collect();
        println!("{text:<12} not onto for n ≤ 64: {misses:?}");
    }
    Ok(())
}
