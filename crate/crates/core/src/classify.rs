//! Representability predicates for the classical forms, and a bounded
//! verifier for "e is an exponent of p in f".

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::arith::{factorize, integer_root, is_prime};
use crate::error::{Error, Result};
use crate::oracle::RepresentationKind;
use crate::poly::Family;

/// Largest bound accepted by [`check_exponent`].
pub const MAX_EXPONENT_BOUND: u64 = 1_000_000;

/// Bound used when the engine certifies an exponent before trusting N-set scaling.
pub const CERTIFICATION_BOUND: u64 = 10_000;

/// `m = x² + y²` for some integers: every prime `≡ 3 (mod 4)` has even exponent.
pub fn is_sum_two_squares(m: u64) -> bool {
    if m == 0 {
        return true;
    }
    factorize(m)
        .expect("m ≥ 1")
        .iter()
        .all(|(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// `m = x² + y² + z²`: `m` is not of the form `4ᵃ(8b + 7)`.
pub fn is_sum_three_squares(m: u64) -> bool {
    if m == 0 {
        return true;
    }
    let mut m = m;
    while m % 4 == 0 {
        m /= 4;
    }
    m % 8 != 7
}

/// `m = x² − y²`: `|m|` is not `≡ 2 (mod 4)`.
pub fn is_diff_two_squares(m: i64) -> bool {
    m.unsigned_abs() % 4 != 2
}

pub fn is_representable(kind: RepresentationKind, m: u64) -> bool {
    match kind {
        RepresentationKind::TwoSquares => is_sum_two_squares(m),
        RepresentationKind::ThreeSquares => is_sum_three_squares(m),
        RepresentationKind::DifferenceOfSquares => m % 4 != 2,
    }
}

/// Whether the nonnegative integer `v` is a value of the family over ℤ.
pub fn family_represents(family: Family, v: u64) -> bool {
    match family {
        Family::SumOfTwoSquares => is_sum_two_squares(v),
        Family::SumOfThreeSquares => is_sum_three_squares(v),
        Family::DifferenceOfSquares => v % 4 != 2,
        Family::Power(k) => {
            let r = integer_root(v, k.max(1));
            r.checked_pow(k.max(1)) == Some(v)
        }
    }
}

/// "`e` is an exponent of `p` in `family`".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentClaim {
    pub family: Family,
    pub p: u64,
    pub e: u32,
}

impl ExponentClaim {
    pub fn new(family: Family, p: u64, e: u32) -> Self {
        ExponentClaim { family, p, e }
    }
}

/// Outcome of a bounded exponent check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentVerdict {
    pub claim: ExponentClaim,
    pub bound: u64,
    /// Smallest represented `v ≤ bound` with `pᵉ | v` whose quotient is not represented.
    pub counterexample: Option<u64>,
}

impl ExponentVerdict {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks the claim for every represented value up to `bound`.
pub fn check_exponent(claim: ExponentClaim, bound: u64) -> Result<ExponentVerdict> {
    if !is_prime(claim.p) {
        return Err(Error::InvalidArgument(format!("{} is not prime", claim.p)));
    }
    if bound > MAX_EXPONENT_BOUND {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} exceeds {MAX_EXPONENT_BOUND}"
        )));
    }
    if let Family::Power(0) = claim.family {
        return Err(Error::Unsupported("x^0 has no representability predicate".into()));
    }
    let step = claim.p.checked_pow(claim.e).filter(|&s| s <= bound);
    let counterexample = step.and_then(|step| {
        (1..=bound / step)
            .map(|q| q * step)
            .find(|&v| family_represents(claim.family, v) && !family_represents(claim.family, v / step))
    });
    Ok(ExponentVerdict {
        claim,
        bound,
        counterexample,
    })
}

/// An exponent of `p` in `family` that follows from the classical
/// representation theorems, if one is known.
pub fn known_exponent(family: Family, p: u64) -> Option<u32> {
    match family {
        Family::Power(k) => Some(k),
        Family::SumOfTwoSquares if p == 2 || p % 4 == 1 => Some(1),
        Family::SumOfTwoSquares => Some(2),
        Family::SumOfThreeSquares if p % 8 == 1 => Some(1),
        Family::SumOfThreeSquares => Some(2),
        Family::DifferenceOfSquares if p != 2 => Some(1),
        Family::DifferenceOfSquares => None,
    }
}

type CertificationCache = HashMap<(Family, u64), Option<u32>>;

/// A known exponent that divides the degree and survives a bounded check.
///
/// Results are memoized per `(family, p)`.
pub fn certified_exponent(family: Family, p: u64) -> Option<u32> {
    static CACHE: OnceLock<Mutex<CertificationCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&hit) = cache.lock().expect("cache lock").get(&(family, p)) {
        return hit;
    }
    let e = certify(family, p);
    cache.lock().expect("cache lock").insert((family, p), e);
    e
}

fn certify(family: Family, p: u64) -> Option<u32> {
    let e = known_exponent(family, p)?;
    if e == 0 || family.degree() % e != 0 {
        return None;
    }
    let verdict = check_exponent(ExponentClaim::new(family, p, e), CERTIFICATION_BOUND).ok()?;
    verdict.holds().then_some(e)
}
