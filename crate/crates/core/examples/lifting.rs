//! Lifting of primitive values from pⁿ to p^{n+1}.
//!
//! Run with `cargo run --example lifting`.

use congruence_images::{DiagonalPolynomial, Oracle};

fn main() -> congruence_images::Result<()> {
    let oracle = Oracle::default();
    let forms = [
        DiagonalPolynomial::sum_of_two_squares(),
        DiagonalPolynomial::sum_of_three_squares(),
        DiagonalPolynomial::new(3, vec![1, 1])?,
    ];
    for f in &forms {
        for p in [2u64, 3, 5] {
            let row: Vec<String> = (1..=6u32)
                .filter(|&n| p.pow(n + 1) <= 100_000)
                .map(|n| match oracle.lifting_counterexample(f, p, n) {
                    Ok(None) => format!("{n}:ok"),
                    Ok(Some(a)) => format!("{n}:fails at {a}"),
                    Err(_) => format!("{n}:n/a"),
                })
                .collect();
            println!("{f} p={p}: {}", row.join(" "));
        }
    }
    // below the level bound the property can fail: x^2+y^2 from 2 to 4
    let primitive = oracle.primitive_image(&forms[0], 2, 1)?;
    let upper = oracle.image_diagonal(&forms[0], 4)?;
    let stuck = primitive.lift(4)?.difference(&upper)?;
    println!("x^2+y^2: primitive values mod 2 {primitive}, lifts missing from A_4 {stuck}");
    Ok(())
}
