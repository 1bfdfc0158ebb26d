//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use congruence_images::arith::{gcd, is_prime, p_adic_valuation};
use congruence_images::classify::is_representable;
use congruence_images::{
    DiagonalPolynomial, Engine, ExponentSource, Family, Oracle, Polynomial, RepresentationKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CRITERION_1_LIMIT: Duration = Duration::from_secs(5);
const CRITERION_2_LIMIT: Duration = Duration::from_secs(10);
const CRITERION_7_LIMIT: Duration = Duration::from_secs(60);
const PRIME_POWER_BOUND: u64 = 100_000;
/// Largest `p^{k+1}` for which the `xᵏ` base N-sets are enumerated.
const BASE_PROFILE_BOUND: u64 = 100_000_000;
const MULTIPLICATIVITY_SEED: u64 = 0x5eed_0008;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle() -> Oracle {
    Oracle::default()
}

fn alpha_oracle(f: &Polynomial, n: u64) -> Result<u64, String> {
    oracle().alpha(f, n).map_err(|e| e.to_string())
}

fn alpha_closed(family: Family, p: u64, n: u32) -> Result<u64, String> {
    Engine::default()
        .alpha_closed(family, p, n)
        .map(|r| r.value)
        .map_err(|e| e.to_string())
}

/// `(p, n, pⁿ)` for `n ≥ 1` and `pⁿ ≤ bound`.
fn prime_powers(p: u64, bound: u64) -> impl Iterator<Item = (u64, u32, u64)> {
    (1u32..)
        .map(move |n| (p, n, p.pow(n)))
        .take_while(move |&(_, _, q)| q <= bound)
}

fn timed(limit: Duration, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = body()?;
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {elapsed:.2?} < {limit:?}"))
}

fn criterion_1() -> Outcome {
    timed(CRITERION_1_LIMIT, || {
        let f = Family::SumOfTwoSquares.into();
        for n in 1..=14u32 {
            let expected = (1u64 << (n - 1)) + 1;
            let closed = alpha_closed(Family::SumOfTwoSquares, 2, n)?;
            let brute = alpha_oracle(&f, 1 << n)?;
            ensure(closed == expected && brute == expected, || {
                format!("2^{n}: formula {expected}, closed {closed}, oracle {brute}")
            })?;
        }
        Ok("n = 1..=14".into())
    })
}

fn criterion_2() -> Outcome {
    timed(CRITERION_2_LIMIT, || {
        let f = Family::SumOfTwoSquares.into();
        let mut count = 0;
        for p in [3u64, 7, 11] {
            for (p, n, q) in prime_powers(p, PRIME_POWER_BOUND) {
                let expected = if n % 2 == 1 {
                    p * (q + 1) / (p + 1)
                } else {
                    (q * p + 1) / (p + 1)
                };
                let closed = alpha_closed(Family::SumOfTwoSquares, p, n)?;
                let brute = alpha_oracle(&f, q)?;
                ensure(closed == expected && brute == expected, || {
                    format!("{p}^{n}: formula {expected}, closed {closed}, oracle {brute}")
                })?;
                count += 1;
            }
        }
        Ok(format!("{count} prime powers"))
    })
}

fn criterion_3() -> Outcome {
    let f = Family::SumOfTwoSquares.into();
    let mut count = 0;
    for p in [5u64, 13, 17] {
        for (p, n, q) in prime_powers(p, PRIME_POWER_BOUND) {
            let brute = alpha_oracle(&f, q)?;
            ensure(brute == q, || format!("{p}^{n}: oracle {brute}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} prime powers"))
}

fn criterion_4() -> Outcome {
    let fam = Family::SumOfThreeSquares;
    let f = fam.into();
    for n in 1..=12u32 {
        let expected = if n % 2 == 1 {
            (5 * (1u64 << (n - 1)) + 1) / 3
        } else {
            2 * (5 * (1u64 << (n - 2)) + 1) / 3
        };
        let closed = alpha_closed(fam, 2, n)?;
        let brute = alpha_oracle(&f, 1 << n)?;
        ensure(closed == expected && brute == expected, || {
            format!("2^{n}: formula {expected}, closed {closed}, oracle {brute}")
        })?;
    }
    let mut count = 12;
    for p in [3u64, 5, 7] {
        for (p, n, q) in prime_powers(p, PRIME_POWER_BOUND) {
            let brute = alpha_oracle(&f, q)?;
            ensure(brute == q, || format!("{p}^{n}: oracle {brute}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} prime powers"))
}

fn criterion_5() -> Outcome {
    let fam = Family::DifferenceOfSquares;
    let f = fam.into();
    for n in 1..=14u32 {
        let expected = if n == 1 { 2 } else { 3 << (n - 2) };
        let closed = alpha_closed(fam, 2, n)?;
        let brute = alpha_oracle(&f, 1 << n)?;
        ensure(closed == expected && brute == expected, || {
            format!("2^{n}: formula {expected}, closed {closed}, oracle {brute}")
        })?;
    }
    let mut count = 14;
    for p in (3..PRIME_POWER_BOUND).filter(|&p| is_prime(p)).take(25) {
        for (p, n, q) in prime_powers(p, PRIME_POWER_BOUND) {
            let brute = alpha_oracle(&f, q)?;
            ensure(brute == q, || format!("{p}^{n}: oracle {brute}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} prime powers"))
}

fn criterion_6() -> Outcome {
    let engine = Engine::default();
    let (mut values, mut profiles) = (0, 0);
    for k in 2..=5u32 {
        let fam = Family::Power(k);
        let f = DiagonalPolynomial::power(k).map_err(|e| e.to_string())?;
        for p in (2..=50u64).filter(|&p| is_prime(p) && k as u64 % p != 0) {
            let d = gcd(k as u64, p - 1);
            for (p, n, q) in prime_powers(p, PRIME_POWER_BOUND) {
                let rr = (n - 1) % k + 1;
                let repunit = (p.pow(k) - 1) / (p - 1);
                let expected = (p.pow(n + k - 1) - p.pow(rr - 1)) / (d * repunit) + 1;
                let closed = alpha_closed(fam, p, n)?;
                let brute = alpha_oracle(&fam.into(), q)?;
                ensure(closed == expected && brute == expected, || {
                    format!("x^{k} at {p}^{n}: formula {expected}, closed {closed}, oracle {brute}")
                })?;
                values += 1;
            }
            if p.checked_pow(k + 1).is_some_and(|m| m <= BASE_PROFILE_BOUND) {
                let profile = engine.base_profile(&f, p).map_err(|e| e.to_string())?;
                for r in 2..=k + 1 {
                    let expected = if r <= k { p - 1 } else { (d - 1) * (p - 1) / d };
                    let got = profile.base_size(r).map_err(|e| e.to_string())?;
                    ensure(got == expected, || format!("x^{k} at p = {p}: n_{r} = {got}, expected {expected}"))?;
                }
                profiles += 1;
            }
        }
    }
    Ok(format!("{values} values, {profiles} base profiles with p^(k+1) <= {BASE_PROFILE_BOUND}"))
}

fn criterion_7() -> Outcome {
    timed(CRITERION_7_LIMIT, || {
        let engine = Engine::default();
        for fam in [Family::SumOfTwoSquares, Family::SumOfThreeSquares, Family::DifferenceOfSquares] {
            let f: Polynomial = fam.into();
            for n in 1..=2000u64 {
                let rule = engine.is_surjective(&f, n).map_err(|e| e.to_string())?;
                let brute = alpha_oracle(&f, n)? == n;
                ensure(rule == brute, || format!("{fam} at n = {n}: rule {rule}, oracle {brute}"))?;
            }
        }
        Ok("3 families, n = 1..=2000".into())
    })
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(MULTIPLICATIVITY_SEED);
    let mut forms: Vec<Polynomial> = [
        Family::SumOfTwoSquares,
        Family::SumOfThreeSquares,
        Family::DifferenceOfSquares,
        Family::Power(3),
    ]
    .into_iter()
    .map(Polynomial::from)
    .collect();
    for _ in 0..5 {
        let k = rng.gen_range(1..=5);
        let t = rng.gen_range(1..=3);
        let coeffs = (0..t)
            .map(|_| rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { 1 } else { -1 })
            .collect();
        forms.push(DiagonalPolynomial::new(k, coeffs).map_err(|e| e.to_string())?.into());
    }
    let mut pairs = 0;
    while pairs < 500 {
        let m1 = rng.gen_range(2..=100u64);
        let m2 = rng.gen_range(2..=10_000 / m1);
        if gcd(m1, m2) != 1 {
            continue;
        }
        let f = &forms[pairs % forms.len()];
        let (a1, a2, a12) = (alpha_oracle(f, m1)?, alpha_oracle(f, m2)?, alpha_oracle(f, m1 * m2)?);
        ensure(a12 == a1 * a2, || format!("{f}: α({m1}·{m2}) = {a12} but {a1}·{a2}"))?;
        pairs += 1;
    }
    Ok(format!("{pairs} coprime pairs over {} forms", forms.len()))
}

fn criterion_9() -> Outcome {
    let engine = Engine::default();
    let f = DiagonalPolynomial::sum_of_two_squares();
    let poly: Polynomial = f.clone().into();
    let mut levels = 0;
    for p in [2u64, 3, 5] {
        let profile = engine.base_profile(&f, p).map_err(|e| e.to_string())?;
        for (p, n, _) in prime_powers(p, PRIME_POWER_BOUND).skip(1) {
            let structured = engine
                .n_set_structured(&f, p, n, &profile, ExponentSource::Certify)
                .map_err(|e| e.to_string())?;
            let brute = oracle().n_set(&poly, p, n).map_err(|e| e.to_string())?;
            ensure(structured == brute, || format!("{p}^{n}: structured {structured}, oracle {brute}"))?;
            levels += 1;
        }
    }
    Ok(format!("{levels} levels"))
}

// The competing reading of the x²+y²+z² rule: the excluded run starts at an odd position.
fn three_squares_odd_reading(a: u64, n: u32) -> bool {
    let Some(i) = (0..n).find(|&i| a >> i & 1 == 1) else {
        return true;
    };
    !(i % 2 == 1 && a >> (i + 1) & 1 == 1 && a >> (i + 2) & 1 == 1 && i + 2 < n)
}

fn criterion_10() -> Outcome {
    let engine = Engine::default();
    let mut cases: Vec<(Family, u64, u64)> = vec![
        (Family::SumOfTwoSquares, 2, 1 << 12),
        (Family::SumOfThreeSquares, 2, 1 << 12),
        (Family::DifferenceOfSquares, 2, 1 << 12),
    ];
    cases.extend([(Family::SumOfTwoSquares, 3, 10_000), (Family::SumOfTwoSquares, 7, 10_000)]);
    let mut residues = 0;
    let mut odd_reading_failures = 0;
    for (fam, p, bound) in cases {
        for (p, n, q) in prime_powers(p, bound) {
            let image = oracle().image(&fam.into(), q).map_err(|e| e.to_string())?;
            for a in 0..q {
                let rule = engine.member_digit_rule(fam, p, n, a).map_err(|e| e.to_string())?;
                ensure(rule == image.contains(a), || {
                    format!("{fam} at {p}^{n}, a = {a}: rule {rule}, oracle {}", image.contains(a))
                })?;
                if fam == Family::SumOfThreeSquares && three_squares_odd_reading(a, n) != image.contains(a) {
                    odd_reading_failures += 1;
                }
                residues += 1;
            }
        }
    }
    ensure(odd_reading_failures > 0, || "the odd-position reading also matched the oracle".into())?;
    Ok(format!(
        "{residues} residues; three-squares run starts at an even position \
         (odd reading disagrees with the oracle on {odd_reading_failures} residues)"
    ))
}

fn criterion_11() -> Outcome {
    let oracle = oracle();
    for kind in RepresentationKind::ALL {
        for m in 0..=10_000 {
            let found = oracle.represent(kind, m).map_err(|e| e.to_string())?.is_some();
            ensure(found == is_representable(kind, m), || format!("{kind} at {m}: search {found}"))?;
        }
    }
    Ok("3 kinds, m = 0..=10000".into())
}

fn criterion_12() -> Outcome {
    let forms = [
        DiagonalPolynomial::sum_of_two_squares(),
        DiagonalPolynomial::difference_of_squares(),
        DiagonalPolynomial::sum_of_three_squares(),
        DiagonalPolynomial::new(3, vec![1, 1]).map_err(|e| e.to_string())?,
    ];
    let mut checked = 0;
    for f in &forms {
        for p in [2u64, 3, 5, 7] {
            let s = p_adic_valuation(f.degree() as u64, p).map_err(|e| e.to_string())?;
            // p^{n+1} ≤ bound
            for (p, n, _) in prime_powers(p, PRIME_POWER_BOUND / p) {
                if n < 2 * s + 1 {
                    continue;
                }
                let bad = oracle().lifting_counterexample(f, p, n).map_err(|e| e.to_string())?;
                ensure(bad.is_none(), || format!("{f} at {p}^{n}: {} does not lift", bad.unwrap_or(0)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (f, p, n) cells, zero counterexamples"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("x^2+y^2 at 2^n matches 2^(n-1)+1", criterion_1),
        ("x^2+y^2 at p = 3 mod 4 matches the closed form", criterion_2),
        ("x^2+y^2 at p = 1 mod 4 is onto", criterion_3),
        ("x^2+y^2+z^2 at 2^n and odd p", criterion_4),
        ("x^2-y^2 at 2^n and odd p", criterion_5),
        ("x^k closed form and base N-set sizes", criterion_6),
        ("surjectivity rules agree with the oracle", criterion_7),
        ("alpha is multiplicative", criterion_8),
        ("structured N-sets agree with the oracle", criterion_9),
        ("digit rules agree with oracle membership", criterion_10),
        ("classify predicates agree with search", criterion_11),
        ("lifting grid has no counterexamples", criterion_12),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
