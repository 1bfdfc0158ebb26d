//! Ground truth by exhaustion.
//!
//! Images of diagonal forms are computed as the cyclic sumset of the
//! per-variable value sets `{cᵢ·xᵏ mod n : x ∈ I_n}`; general polynomials are
//! enumerated over all of `I_nᵗ`. Everything else in the crate is checked
//! against these sets.

use std::fmt;
use std::str::FromStr;

use crate::arith::{checked_pow, is_prime, is_square, p_adic_valuation};
use crate::error::{Error, Result};
use crate::poly::{DiagonalPolynomial, GeneralPolynomial, Polynomial};
use crate::residue::{n_set, ResidueSet};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const BUDGET_ENV: &str = "CONGRUENCE_ORACLE_BUDGET";

/// Upper bound on the number of points an exhaustive search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub enumeration: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(enumeration: u64) -> Self {
        Budget { enumeration }
    }

    /// Reads `CONGRUENCE_ORACLE_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Budget::new)
                .map_err(|_| Error::InvalidArgument(format!("{BUDGET_ENV}={v:?} is not an integer"))),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn check(&self, required: u128) -> Result<()> {
        if required > self.enumeration as u128 {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.enumeration,
            });
        }
        Ok(())
    }
}

/// An assignment attaining `value` modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<u64>,
    pub modulus: u64,
    pub value: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepresentationKind {
    TwoSquares,
    ThreeSquares,
    DifferenceOfSquares,
}

impl RepresentationKind {
    pub const ALL: [RepresentationKind; 3] = [
        RepresentationKind::TwoSquares,
        RepresentationKind::ThreeSquares,
        RepresentationKind::DifferenceOfSquares,
    ];
}

impl fmt::Display for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepresentationKind::TwoSquares => "two-squares",
            RepresentationKind::ThreeSquares => "three-squares",
            RepresentationKind::DifferenceOfSquares => "difference",
        })
    }
}

impl FromStr for RepresentationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-squares" => Ok(RepresentationKind::TwoSquares),
            "three-squares" => Ok(RepresentationKind::ThreeSquares),
            "difference" => Ok(RepresentationKind::DifferenceOfSquares),
            _ => Err(Error::InvalidArgument(format!("unknown representation kind {s:?}"))),
        }
    }
}

/// Brute-force evaluator with a configurable enumeration budget.
#[derive(Debug, Clone, Copy, Default)]
pub struct Oracle {
    pub budget: Budget,
}

impl Oracle {
    pub fn new(budget: Budget) -> Self {
        Oracle { budget }
    }

    pub fn image(&self, f: &Polynomial, n: u64) -> Result<ResidueSet> {
        match f {
            Polynomial::Diagonal(d) => self.image_diagonal(d, n),
            Polynomial::General(g) => self.image_general(g, n),
        }
    }

    /// `A_n` of a diagonal form via sumsets of per-variable value sets.
    pub fn image_diagonal(&self, f: &DiagonalPolynomial, n: u64) -> Result<ResidueSet> {
        check_modulus(n)?;
        self.budget.check(n as u128)?;
        let sets = self.value_sets(f, n)?;
        fold_sumsets(n, sets.iter())
    }

    fn value_sets(&self, f: &DiagonalPolynomial, n: u64) -> Result<Vec<ResidueSet>> {
        let mut sets: Vec<ResidueSet> = Vec::with_capacity(f.variables());
        for (i, &c) in f.coefficients().iter().enumerate() {
            let dup = f.coefficients()[..i].iter().position(|&d| d == c);
            let set = match dup {
                Some(j) => sets[j].clone(),
                None => f.value_set(i, n)?,
            };
            sets.push(set);
        }
        Ok(sets)
    }

    /// `A_n` by visiting every point of `I_nᵗ`.
    pub fn image_general(&self, f: &GeneralPolynomial, n: u64) -> Result<ResidueSet> {
        check_modulus(n)?;
        let points = enumeration_size(n, f.variables());
        self.budget.check(points)?;
        let mut out = ResidueSet::empty(n)?;
        let mut xs = vec![0u64; f.variables()];
        loop {
            out.insert(f.eval_mod(&xs, n));
            if !advance(&mut xs, n) {
                break;
            }
        }
        Ok(out)
    }

    /// `α(n) = |A_n|`.
    pub fn alpha(&self, f: &Polynomial, n: u64) -> Result<u64> {
        Ok(self.image(f, n)?.len())
    }

    /// Lexicographically first assignment in `I_nᵗ` with `f ≡ a (mod n)`.
    pub fn witness(&self, f: &Polynomial, n: u64, a: u64) -> Result<Option<Witness>> {
        check_modulus(n)?;
        if a >= n {
            return Err(Error::InvalidArgument(format!("{a} is outside I_{n}")));
        }
        let assignment = match f {
            Polynomial::Diagonal(d) => self.witness_diagonal(d, n, a)?,
            Polynomial::General(g) => {
                self.budget.check(enumeration_size(n, g.variables()))?;
                let mut xs = vec![0u64; g.variables()];
                loop {
                    if g.eval_mod(&xs, n) == a {
                        break Some(xs);
                    }
                    if !advance(&mut xs, n) {
                        break None;
                    }
                }
            }
        };
        Ok(assignment.map(|assignment| Witness {
            assignment,
            modulus: n,
            value: a,
        }))
    }

    // Greedy over suffix images: choose the smallest xᵢ for which the rest
    // can still be completed. This is exactly the lexicographic first hit.
    fn witness_diagonal(&self, f: &DiagonalPolynomial, n: u64, a: u64) -> Result<Option<Vec<u64>>> {
        let t = f.variables();
        self.budget.check(n as u128 * t as u128)?;
        let sets = self.value_sets(f, n)?;
        let mut suffix = vec![ResidueSet::from_members(n, [0])?; t + 1];
        for i in (0..t).rev() {
            suffix[i] = suffix[i + 1].cyclic_sumset(&sets[i])?;
        }
        if !suffix[0].contains(a) {
            return Ok(None);
        }
        let mut target = a;
        let mut xs = Vec::with_capacity(t);
        for (i, &c) in f.coefficients().iter().enumerate() {
            let x = (0..n)
                .find(|&x| {
                    let rest = (target + n - f.term_mod(c, x, n)) % n;
                    suffix[i + 1].contains(rest)
                })
                .ok_or_else(|| Error::Consistency("suffix image lost a member".into()))?;
            target = (target + n - f.term_mod(c, x, n)) % n;
            xs.push(x);
        }
        Ok(Some(xs))
    }

    /// `N_{pⁿ} = A_{pⁿ}(p^{n−1}) \ A_{pⁿ}`.
    pub fn n_set(&self, f: &Polynomial, p: u64, n: u32) -> Result<ResidueSet> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::InvalidArgument("N-sets start at level 1".into()));
        }
        let upper_mod = checked_pow(p, n)?;
        self.budget.check(upper_mod as u128)?;
        let upper = self.image(f, upper_mod)?;
        let lower = self.image(f, upper_mod / p)?;
        n_set(&upper, &lower)
    }

    /// Values of `f` mod `pⁿ` reached by some assignment with a coordinate
    /// coprime to `p`.
    pub fn primitive_image(&self, f: &DiagonalPolynomial, p: u64, n: u32) -> Result<ResidueSet> {
        check_prime(p)?;
        let m = checked_pow(p, n)?;
        self.budget.check(m as u128)?;
        let sets = self.value_sets(f, m)?;
        let t = sets.len();
        let zero = ResidueSet::from_members(m, [0])?;
        let mut prefix = vec![zero.clone(); t + 1];
        for i in 0..t {
            prefix[i + 1] = prefix[i].cyclic_sumset(&sets[i])?;
        }
        let mut suffix = zero.clone();
        let mut out = ResidueSet::empty(m)?;
        for i in (0..t).rev() {
            let units = f.unit_value_set(i, m, p)?;
            if !units.is_empty() {
                let part = prefix[i].cyclic_sumset(&suffix)?.cyclic_sumset(&units)?;
                out = out.union(&part)?;
            }
            suffix = suffix.cyclic_sumset(&sets[i])?;
        }
        Ok(out)
    }

    /// First lift `a + j·pⁿ` missing from `A_{p^{n+1}}` although `a` has a
    /// primitive witness mod `pⁿ`. Errors on unmet hypotheses.
    pub fn lifting_counterexample(&self, f: &DiagonalPolynomial, p: u64, n: u32) -> Result<Option<u64>> {
        check_prime(p)?;
        if !f.coprime_to(p) {
            return Err(Error::Precondition(format!("{p} divides a coefficient of {f}")));
        }
        let s = p_adic_valuation(f.degree() as u64, p)?;
        if n < 2 * s + 1 {
            return Err(Error::Precondition(format!(
                "level {n} is below 2s+1 = {} for p = {p}, k = {}",
                2 * s + 1,
                f.degree()
            )));
        }
        let upper_mod = checked_pow(p, n + 1)?;
        self.budget.check(upper_mod as u128)?;
        let primitive = self.primitive_image(f, p, n)?;
        let upper = self.image_diagonal(f, upper_mod)?;
        let lifted = primitive.lift(upper_mod)?;
        Ok(lifted.difference(&upper)?.iter().next())
    }

    /// Checks the lifting property at level `n`: every primitive value mod
    /// `pⁿ` lifts to all `p` residues mod `p^{n+1}`.
    pub fn verify_lifting(&self, f: &DiagonalPolynomial, p: u64, n: u32) -> Result<bool> {
        Ok(self.lifting_counterexample(f, p, n)?.is_none())
    }

    /// Searches for an integer representation of `m`.
    ///
    /// Tuples are `(x, y)` with `x ≥ y` for two squares, `(x, y, z)` with
    /// `x ≥ y ≥ z` for three squares, and `(x, y)` with `x² − y² = m` for a
    /// difference. The search is exhaustive within the natural bounds.
    pub fn represent(&self, kind: RepresentationKind, m: u64) -> Result<Option<Vec<u64>>> {
        self.budget.check(m as u128)?;
        Ok(match kind {
            RepresentationKind::TwoSquares => two_squares(m).map(|(x, y)| vec![x, y]),
            RepresentationKind::ThreeSquares => {
                let mut z = 0u64;
                let mut found = None;
                while 3 * z * z <= m {
                    if let Some((x, y)) = two_squares_at_least(m - z * z, z) {
                        found = Some(vec![x, y, z]);
                        break;
                    }
                    z += 1;
                }
                found
            }
            RepresentationKind::DifferenceOfSquares => {
                if m == 0 {
                    Some(vec![0, 0])
                } else {
                    let lo = m.isqrt() + u64::from(!is_square(m));
                    (lo..=m.div_ceil(2))
                        .find(|&x| is_square(x * x - m))
                        .map(|x| vec![x, (x * x - m).isqrt()])
                }
            }
        })
    }
}

fn two_squares(m: u64) -> Option<(u64, u64)> {
    two_squares_at_least(m, 0)
}

// x² + y² = m with x ≥ y ≥ floor, smallest y first
fn two_squares_at_least(m: u64, floor: u64) -> Option<(u64, u64)> {
    let mut y = floor;
    while 2 * y * y <= m {
        let rest = m - y * y;
        if is_square(rest) {
            return Some((rest.isqrt(), y));
        }
        y += 1;
    }
    None
}

fn fold_sumsets<'a>(n: u64, sets: impl Iterator<Item = &'a ResidueSet>) -> Result<ResidueSet> {
    let mut acc = ResidueSet::from_members(n, [0])?;
    for s in sets {
        acc = acc.cyclic_sumset(s)?;
        if acc.is_full() {
            break;
        }
    }
    Ok(acc)
}

fn enumeration_size(n: u64, t: usize) -> u128 {
    (0..t).fold(1u128, |acc, _| acc.saturating_mul(n as u128))
}

// odometer step over I_nᵗ; false once wrapped around
fn advance(xs: &mut [u64], n: u64) -> bool {
    for x in xs.iter_mut().rev() {
        *x += 1;
        if *x < n {
            return true;
        }
        *x = 0;
    }
    false
}

fn check_modulus(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}
