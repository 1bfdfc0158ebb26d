//! Polynomial types: diagonal forms `c₁x₁ᵏ + … + cₜxₜᵏ`, general integer
//! polynomials, and the named families with known closed forms.

use std::fmt;

use crate::arith::{floor_mod, mod_pow_u64, mul_mod};
use crate::error::{Error, Result};
use crate::residue::ResidueSet;

/// `c₁x₁ᵏ + c₂x₂ᵏ + ⋯ + cₜxₜᵏ` with every `cᵢ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalPolynomial {
    k: u32,
    coefficients: Vec<i64>,
}

impl DiagonalPolynomial {
    pub fn new(k: u32, coefficients: Vec<i64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument("need at least one variable".into()));
        }
        if coefficients.contains(&0) {
            return Err(Error::InvalidArgument("coefficients must be nonzero".into()));
        }
        Ok(DiagonalPolynomial { k, coefficients })
    }

    pub fn sum_of_two_squares() -> Self {
        Family::SumOfTwoSquares.polynomial()
    }

    pub fn sum_of_three_squares() -> Self {
        Family::SumOfThreeSquares.polynomial()
    }

    pub fn difference_of_squares() -> Self {
        Family::DifferenceOfSquares.polynomial()
    }

    pub fn power(k: u32) -> Result<Self> {
        Self::new(k, vec![1])
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn variables(&self) -> usize {
        self.coefficients.len()
    }

    pub fn family(&self) -> Option<Family> {
        Family::recognize(self)
    }

    /// True when `p` divides none of the coefficients.
    pub fn coprime_to(&self, p: u64) -> bool {
        self.coefficients
            .iter()
            .all(|&c| c.unsigned_abs() % p != 0)
    }

    /// `(plus, minus)` counts when the form is `±x₁² ± ⋯ ± xₜ²`.
    pub fn signed_square_signature(&self) -> Option<(usize, usize)> {
        if self.k != 2 || self.coefficients.iter().any(|c| c.abs() != 1) {
            return None;
        }
        let plus = self.coefficients.iter().filter(|&&c| c == 1).count();
        Some((plus, self.coefficients.len() - plus))
    }

    /// `f(xs) mod n`.
    pub fn eval_mod(&self, xs: &[u64], n: u64) -> u64 {
        assert_eq!(xs.len(), self.coefficients.len(), "arity mismatch");
        self.coefficients
            .iter()
            .zip(xs)
            .fold(0u64, |acc, (&c, &x)| {
                (acc + self.term_mod(c, x, n)) % n
            })
    }

    pub(crate) fn term_mod(&self, c: i64, x: u64, n: u64) -> u64 {
        mul_mod(floor_mod(c as i128, n), mod_pow_u64(x % n, self.k as u64, n), n)
    }

    /// `{cᵢ·xᵏ mod n : x ∈ I_n}` for variable `i`.
    pub fn value_set(&self, i: usize, n: u64) -> Result<ResidueSet> {
        let c = self.coefficients[i];
        ResidueSet::from_values(n, (0..n).map(|x| self.term_mod(c, x, n)))
    }

    /// Like [`value_set`](Self::value_set) but over `x` not divisible by `p`.
    pub fn unit_value_set(&self, i: usize, n: u64, p: u64) -> Result<ResidueSet> {
        let c = self.coefficients[i];
        ResidueSet::from_values(
            n,
            (0..n).filter(|x| x % p != 0).map(|x| self.term_mod(c, x, n)),
        )
    }

    pub fn to_general(&self) -> GeneralPolynomial {
        let t = self.variables();
        let terms = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut e = vec![0; t];
                e[i] = self.k;
                Term {
                    coefficient: c,
                    exponents: e,
                }
            })
            .collect();
        GeneralPolynomial { variables: t, terms }
    }
}

impl fmt::Display for DiagonalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.variables());
        let terms: Vec<(i64, Vec<(usize, u32)>)> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, vec![(i, self.k)]))
            .collect();
        write_terms(f, &terms, &names)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coefficient: i64,
    pub exponents: Vec<u32>,
}

/// Arbitrary integer polynomial in `t` variables, as a list of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralPolynomial {
    variables: usize,
    terms: Vec<Term>,
}

impl GeneralPolynomial {
    pub fn new(variables: usize, terms: Vec<Term>) -> Result<Self> {
        if variables == 0 {
            return Err(Error::InvalidArgument("need at least one variable".into()));
        }
        for (i, term) in terms.iter().enumerate() {
            if term.coefficient == 0 {
                return Err(Error::InvalidArgument("coefficients must be nonzero".into()));
            }
            if term.exponents.len() != variables {
                return Err(Error::InvalidArgument(format!(
                    "term {i} has {} exponents, expected {variables}",
                    term.exponents.len()
                )));
            }
            if terms[..i].iter().any(|t| t.exponents == term.exponents) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate monomial {:?}",
                    term.exponents
                )));
            }
        }
        Ok(GeneralPolynomial { variables, terms })
    }

    /// A polynomial in `variables` unknowns equal to the constant `c`.
    pub fn constant(variables: usize, c: i64) -> Result<Self> {
        let terms = if c == 0 {
            vec![]
        } else {
            vec![Term {
                coefficient: c,
                exponents: vec![0; variables],
            }]
        };
        Self::new(variables, terms)
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval_mod(&self, xs: &[u64], n: u64) -> u64 {
        assert_eq!(xs.len(), self.variables, "arity mismatch");
        self.terms.iter().fold(0u64, |acc, term| {
            let mono = term
                .exponents
                .iter()
                .zip(xs)
                .fold(1 % n, |m, (&e, &x)| mul_mod(m, mod_pow_u64(x % n, e as u64, n), n));
            (acc + mul_mod(floor_mod(term.coefficient as i128, n), mono, n)) % n
        })
    }

    /// Recovers the diagonal form when every term is a single variable to a
    /// common power and every variable appears exactly once.
    pub fn as_diagonal(&self) -> Option<DiagonalPolynomial> {
        let mut coeffs = vec![0i64; self.variables];
        let mut k = None;
        for term in &self.terms {
            let nonzero: Vec<(usize, u32)> = term
                .exponents
                .iter()
                .copied()
                .enumerate()
                .filter(|&(_, e)| e > 0)
                .collect();
            let [(i, e)] = nonzero[..] else {
                return None;
            };
            if *k.get_or_insert(e) != e {
                return None;
            }
            coeffs[i] = term.coefficient;
        }
        DiagonalPolynomial::new(k?, coeffs).ok()
    }
}

impl fmt::Display for GeneralPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.variables);
        let terms: Vec<(i64, Vec<(usize, u32)>)> = self
            .terms
            .iter()
            .map(|t| {
                let vars = t
                    .exponents
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(_, e)| e > 0)
                    .collect();
                (t.coefficient, vars)
            })
            .collect();
        write_terms(f, &terms, &names)
    }
}

/// Either representation; diagonal forms unlock the fast paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Polynomial {
    Diagonal(DiagonalPolynomial),
    General(GeneralPolynomial),
}

impl Polynomial {
    pub fn variables(&self) -> usize {
        match self {
            Polynomial::Diagonal(d) => d.variables(),
            Polynomial::General(g) => g.variables(),
        }
    }

    pub fn eval_mod(&self, xs: &[u64], n: u64) -> u64 {
        match self {
            Polynomial::Diagonal(d) => d.eval_mod(xs, n),
            Polynomial::General(g) => g.eval_mod(xs, n),
        }
    }

    pub fn as_diagonal(&self) -> Option<&DiagonalPolynomial> {
        match self {
            Polynomial::Diagonal(d) => Some(d),
            Polynomial::General(_) => None,
        }
    }

    pub fn family(&self) -> Option<Family> {
        self.as_diagonal().and_then(DiagonalPolynomial::family)
    }
}

impl From<DiagonalPolynomial> for Polynomial {
    fn from(d: DiagonalPolynomial) -> Self {
        Polynomial::Diagonal(d)
    }
}

impl From<GeneralPolynomial> for Polynomial {
    fn from(g: GeneralPolynomial) -> Self {
        Polynomial::General(g)
    }
}

impl From<Family> for Polynomial {
    fn from(f: Family) -> Self {
        Polynomial::Diagonal(f.polynomial())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polynomial::Diagonal(d) => d.fmt(f),
            Polynomial::General(g) => g.fmt(f),
        }
    }
}

/// The forms with closed-form α at every prime power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `x² + y²`
    SumOfTwoSquares,
    /// `x² + y² + z²`
    SumOfThreeSquares,
    /// `x² − y²`
    DifferenceOfSquares,
    /// `xᵏ`
    Power(u32),
}

impl Family {
    pub fn polynomial(self) -> DiagonalPolynomial {
        let (k, coefficients) = match self {
            Family::SumOfTwoSquares => (2, vec![1, 1]),
            Family::SumOfThreeSquares => (2, vec![1, 1, 1]),
            Family::DifferenceOfSquares => (2, vec![1, -1]),
            Family::Power(k) => (k.max(1), vec![1]),
        };
        DiagonalPolynomial { k, coefficients }
    }

    /// Exact match up to renaming (and hence reordering) of variables.
    pub fn recognize(f: &DiagonalPolynomial) -> Option<Family> {
        let mut c = f.coefficients.clone();
        c.sort_unstable();
        match (f.k, c.as_slice()) {
            (k, [1]) => Some(Family::Power(k)),
            (2, [1, 1]) => Some(Family::SumOfTwoSquares),
            (2, [1, 1, 1]) => Some(Family::SumOfThreeSquares),
            (2, [-1, 1]) => Some(Family::DifferenceOfSquares),
            _ => None,
        }
    }

    pub fn degree(self) -> u32 {
        self.polynomial().k
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.polynomial().fmt(f)
    }
}

pub(crate) fn default_names(t: usize) -> Vec<String> {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    if t <= LETTERS.len() {
        LETTERS[..t].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=t).map(|i| format!("x{i}")).collect()
    }
}

/// Writes `c·Π var^e` terms in the grammar accepted by the parser.
pub(crate) fn write_terms(
    f: &mut impl fmt::Write,
    terms: &[(i64, Vec<(usize, u32)>)],
    names: &[String],
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (idx, (c, vars)) in terms.iter().enumerate() {
        let mag = c.unsigned_abs();
        match (idx, *c < 0) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, "-")?,
            (_, false) => write!(f, "+")?,
        }
        if mag != 1 || vars.is_empty() {
            write!(f, "{mag}")?;
        }
        for &(i, e) in vars {
            write!(f, "{}", names[i])?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    Ok(())
}
