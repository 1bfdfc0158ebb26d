//! Membership in A_{pⁿ} read off the base-p digits, compared with the oracle.
//!
//! Run with `cargo run --example digit_rules`.

use congruence_images::engine::base_digits;
use congruence_images::{Engine, Family};

fn main() -> congruence_images::Result<()> {
    let engine = Engine::default();
    for (fam, p, n) in [
        (Family::SumOfTwoSquares, 2u64, 5u32),
        (Family::SumOfTwoSquares, 3, 3),
        (Family::SumOfThreeSquares, 2, 5),
        (Family::DifferenceOfSquares, 2, 4),
    ] {
        let q = p.pow(n);
        let image = engine.oracle.image(&fam.into(), q)?;
        let mut excluded = Vec::new();
        for a in 0..q {
            let member = engine.member_digit_rule(fam, p, n, a)?;
            assert_eq!(member, image.contains(a));
            if !member {
                let digits: String = base_digits(a, p, n).iter().rev().map(|d| d.to_string()).collect();
                excluded.push(format!("{a}={digits}"));
            }
        }
        println!("{fam} mod {p}^{n}, excluded (base {p}): {}", excluded.join(" "));
    }
    Ok(())
}
