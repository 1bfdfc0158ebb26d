//! Integer representability predicates, explicit representations and
//! bounded exponent checks.
//!
//! Run with `cargo run --example representations`.

use congruence_images::classify::{check_exponent, certified_exponent, is_representable, ExponentClaim};
use congruence_images::{Family, Oracle, RepresentationKind};

fn main() -> congruence_images::Result<()> {
    let oracle = Oracle::default();
    for kind in RepresentationKind::ALL {
        for m in [6u64, 7, 21, 28, 45] {
            let found = oracle.represent(kind, m)?;
            println!("{kind:<13} {m:>3}: predicate {:<5} search {found:?}", is_representable(kind, m));
        }
    }

    for (fam, p, e) in [
        (Family::SumOfTwoSquares, 5, 1),
        (Family::SumOfTwoSquares, 3, 1),
        (Family::SumOfTwoSquares, 3, 2),
        (Family::SumOfThreeSquares, 2, 1),
        (Family::SumOfThreeSquares, 2, 2),
        (Family::DifferenceOfSquares, 2, 2),
    ] {
        let v = check_exponent(ExponentClaim::new(fam, p, e), 100_000)?;
        match v.counterexample {
            None => println!("{e} is an exponent of {p} in {fam} up to {}", v.bound),
            Some(c) => println!("{e} is not an exponent of {p} in {fam}: {c} is a value, {c}/{p}^{e} is not"),
        }
    }
    println!("certified for x^2+y^2+z^2 at 3: {:?}", certified_exponent(Family::SumOfThreeSquares, 3));
    Ok(())
}
