//! N-sets, their periodic scaling, and the α recurrence they drive.
//!
//! Run with `cargo run --example nsets`.

use congruence_images::{
    DiagonalPolynomial, Engine, ExponentSource, Oracle, Polynomial, PrimePowerContext,
};

fn main() -> congruence_images::Result<()> {
    let engine = Engine::default();
    let oracle = Oracle::default();
    for (f, p) in [
        (DiagonalPolynomial::sum_of_two_squares(), 2u64),
        (DiagonalPolynomial::sum_of_three_squares(), 2),
        (DiagonalPolynomial::power(3)?, 7),
    ] {
        let poly: Polynomial = f.clone().into();
        let profile = engine.base_profile(&f, p)?;
        println!("{f} at p = {p}");
        for (r, set) in profile.base_sets() {
            println!("  base N_{{{p}^{r}}} = {set}");
        }
        for n in 2..=7u32 {
            if p.pow(n) > 1 << 16 {
                break;
            }
            let scaled = engine.n_set_structured(&f, p, n, &profile, ExponentSource::Certify)?;
            let brute = oracle.n_set(&poly, p, n)?;
            println!("  N_{{{p}^{n}}} = {scaled}  oracle agrees: {}", scaled == brute);
        }
        let sizes = profile.sizes();
        let alpha_p = profile.alpha_p.expect("filled by base_profile");
        for n in [5u32, 8] {
            let rec = engine.alpha_nr_recurrence(&f, p, n, &sizes, ExponentSource::Certify)?;
            let explicit = engine.corollary_explicit(&PrimePowerContext::new(p, n, f.degree())?, alpha_p, &sizes)?;
            println!("  α({p}^{n}) = {} by recurrence, {explicit} by the explicit formula", rec.value);
        }
    }
    Ok(())
}
