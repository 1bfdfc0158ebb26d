//! α(n) for the named families by every route, with cross-checks.
//!
//! Run with `cargo run --example alpha`.

use congruence_images::{Engine, Family, MethodChoice, Polynomial};

fn main() -> congruence_images::Result<()> {
    let engine = Engine::default();
    let families = [
        Family::SumOfTwoSquares,
        Family::SumOfThreeSquares,
        Family::DifferenceOfSquares,
        Family::Power(3),
    ];
    for fam in families {
        let f: Polynomial = fam.into();
        println!("{fam}");
        for n in [45, 96, 360, 1001, 4096] {
            let r = engine.alpha(&f, n, MethodChoice::Auto, true)?;
            let against = r.checked.map(|c| c.against.to_string()).unwrap_or_default();
            println!("  α({n:>4}) = {:>4}  via {:<16} checked against {against}", r.value, r.method.to_string());
        }
    }

    // the same prime power by three independent routes
    let f: Polynomial = Family::SumOfTwoSquares.into();
    for choice in [MethodChoice::Closed, MethodChoice::Recurrence, MethodChoice::Oracle] {
        let r = engine.alpha(&f, 3u64.pow(7), choice, false)?;
        println!("x^2+y^2 at 3^7: {} ({})", r.value, r.method);
    }
    Ok(())
}
