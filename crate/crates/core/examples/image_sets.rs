//! Image sets A_n, witnesses and their serialized forms.
//!
//! Run with `cargo run --example image_sets`.

use congruence_images::cli::parse_poly;
use congruence_images::{Oracle, ResidueSet};

fn main() -> congruence_images::Result<()> {
    let oracle = Oracle::default();
    for text in ["x^2+y^2", "x^2-y^2", "3x^3-2y^3", "x^2+y^3"] {
        let spec = parse_poly(text)?;
        let family = spec.family.map(|f| format!(" (family {f})")).unwrap_or_default();
        println!("{text} parsed as {}{family}", spec.parsed);
        for n in [8, 9, 12] {
            let image = oracle.image(&spec.parsed, n)?;
            println!("  A_{n:<2} = {image}  |A_{n}| = {}", image.len());
        }
    }

    let f = parse_poly("x^2+y^2")?.parsed;
    let image = oracle.image(&f, 8)?;
    println!("hex bits of A_8: {}", image.to_hex());
    println!("json of A_8: {}", serde_json::to_string(&image).expect("serializable"));
    assert_eq!(ResidueSet::from_hex(8, &image.to_hex())?, image);

    for a in [5, 6] {
        match oracle.witness(&f, 8, a)? {
            Some(w) => println!("{a} ≡ f{:?} (mod 8)", w.assignment),
            None => println!("{a} is not a value of f mod 8"),
        }
    }
    Ok(())
}
