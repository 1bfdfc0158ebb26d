//! α at prime powers and its multiplicative assembly.
//!
//! Three independent routes compute `α(pⁿ)`:
//!
//! * closed forms for `x²+y²`, `x²+y²+z²`, `x²−y²` and `xᵏ`;
//! * the periodic recurrence `α(pⁿ) = p·α(p^{n−1}) − n_r`, which needs only the
//!   base N-set sizes `n_2..n_{k+1}` and is valid when an exponent of `p` in
//!   `f` divides `k`;
//! * the unconditional recurrence `α(pⁿ) = p·α(p^{n−1}) − |N_{pⁿ}|` with every
//!   N-set taken from the oracle.
//!
//! [`Engine::alpha`] factors `n` and multiplies prime-power values together.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{checked_pow, factorize, gcd, p_adic_valuation};
use crate::classify::certified_exponent;
use crate::error::{Error, Result};
use crate::oracle::{check_prime, Oracle};
use crate::poly::{DiagonalPolynomial, Family, Polynomial};
use crate::residue::{n_set, NSetProfile, ResidueSet, SizeProfile};

/// How a value of α was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    NrRecurrence,
    OracleRecurrence,
    Oracle,
    Multiplicative,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::NrRecurrence => "nr-recurrence",
            Method::OracleRecurrence => "oracle-recurrence",
            Method::Oracle => "oracle",
            Method::Multiplicative => "multiplicative",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Method::ClosedForm,
            Method::NrRecurrence,
            Method::OracleRecurrence,
            Method::Oracle,
            Method::Multiplicative,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Caller's preference for [`Engine::alpha`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MethodChoice {
    /// Closed form where cited, else the N-set recurrence, else the oracle recurrence.
    #[default]
    Auto,
    Closed,
    /// The N-set recurrence when its hypotheses hold, else the oracle recurrence.
    Recurrence,
    /// Brute force over the whole modulus.
    Oracle,
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "closed" => Ok(MethodChoice::Closed),
            "recurrence" => Ok(MethodChoice::Recurrence),
            "oracle" => Ok(MethodChoice::Oracle),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub against: Method,
    pub agree: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaResult {
    pub value: u64,
    pub method: Method,
    pub checked: Option<CrossCheck>,
}

impl AlphaResult {
    fn new(value: u64, method: Method) -> Self {
        AlphaResult {
            value,
            method,
            checked: None,
        }
    }
}

/// Where the exponent hypothesis of the N-set recurrence comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentSource {
    /// Use a named family's known exponent after a bounded check.
    #[default]
    Certify,
    /// The caller vouches that this exponent of `p` in `f` divides `k`.
    Assert(u32),
}

/// Per-prime-power parameters: `s = v_p(k)`, `d = gcd(k, p−1)`, and the
/// canonical level `r ∈ {2..k+1}` with `r ≡ n (mod k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePowerContext {
    pub p: u64,
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub d: u64,
    pub r: Option<u32>,
}

impl PrimePowerContext {
    pub fn new(p: u64, n: u32, k: u32) -> Result<Self> {
        check_prime(p)?;
        if k == 0 || n == 0 {
            return Err(Error::InvalidArgument("need k ≥ 1 and n ≥ 1".into()));
        }
        Ok(PrimePowerContext {
            p,
            n,
            k,
            s: p_adic_valuation(k as u64, p)?,
            d: gcd(k as u64, p - 1),
            r: (n >= 2).then(|| canonical_level(n, k)),
        })
    }
}

/// `r ∈ {2..k+1}` with `r ≡ n (mod k)`, for `n ≥ 2`.
pub fn canonical_level(n: u32, k: u32) -> u32 {
    debug_assert!(n >= 2 && k >= 1);
    (n - 2) % k + 2
}

/// Which surjectivity characterization applies to a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SurjectivityRule {
    TwoSquares,
    ThreeSquares,
    Difference,
    Always,
}

fn surjectivity_rule(f: &DiagonalPolynomial) -> Option<SurjectivityRule> {
    let (plus, minus) = f.signed_square_signature()?;
    // negating every coefficient negates A_n, so only the sign pattern matters
    let (a, b) = (plus.max(minus), plus.min(minus));
    match (a, b) {
        (_, _) if a + b < 2 => None,
        (2, 0) => Some(SurjectivityRule::TwoSquares),
        (3, 0) => Some(SurjectivityRule::ThreeSquares),
        (1, 1) => Some(SurjectivityRule::Difference),
        _ => Some(SurjectivityRule::Always),
    }
}

/// Computes α by closed forms, recurrences and the oracle.
#[derive(Debug, Clone, Copy, Default)]
pub struct Engine {
    pub oracle: Oracle,
}

impl Engine {
    pub fn new(oracle: Oracle) -> Self {
        Engine { oracle }
    }

    /// True when [`alpha_closed`](Self::alpha_closed) covers `(family, p)`.
    pub fn has_closed_form(family: Family, p: u64) -> bool {
        match family {
            Family::Power(k) => k >= 1 && (k as u64) % p != 0,
            _ => true,
        }
    }

    /// `α(pⁿ)` for a named family from its explicit formula.
    pub fn alpha_closed(&self, family: Family, p: u64, n: u32) -> Result<AlphaResult> {
        check_prime(p)?;
        let value = closed_value(family, p, n)?;
        Ok(AlphaResult::new(value, Method::ClosedForm))
    }

    /// `α(pⁿ)` by iterating `α(p^m) = p·α(p^{m−1}) − n_r` from `α(p)`.
    pub fn alpha_nr_recurrence(
        &self,
        f: &DiagonalPolynomial,
        p: u64,
        n: u32,
        profile: &SizeProfile,
        exponent: ExponentSource,
    ) -> Result<AlphaResult> {
        self.check_scaling_hypotheses(f, p, exponent)?;
        if profile.p != p || profile.k != f.degree() {
            return Err(Error::Precondition(format!(
                "profile is for p = {}, k = {}",
                profile.p, profile.k
            )));
        }
        if n == 0 {
            return Ok(AlphaResult::new(1, Method::NrRecurrence));
        }
        let alpha_p = match profile.alpha_p {
            Some(a) => a,
            None => self.oracle.image_diagonal(f, p)?.len(),
        };
        let k = f.degree();
        let mut alpha = alpha_p as u128;
        for m in 2..=n {
            let nr = profile.get(canonical_level(m, k))? as u128;
            alpha = (p as u128 * alpha)
                .checked_sub(nr)
                .ok_or_else(|| Error::Consistency(format!("recurrence went negative at level {m}")))?;
        }
        let value = u64::try_from(alpha).map_err(|_| Error::Overflow("alpha"))?;
        Ok(AlphaResult::new(value, Method::NrRecurrence))
    }

    /// `α(pⁿ)` by the unconditional recurrence with oracle N-sets at every level.
    pub fn alpha_oracle_recurrence(&self, f: &Polynomial, p: u64, n: u32) -> Result<AlphaResult> {
        let images = self.image_tower(f, p, n)?;
        let mut alpha = 1u64;
        for m in 1..images.len() {
            let nset = n_set(&images[m], &images[m - 1])?;
            alpha = p * alpha - nset.len();
        }
        Ok(AlphaResult::new(alpha, Method::OracleRecurrence))
    }

    // A_{p^0}, A_{p^1}, …, A_{p^n}
    fn image_tower(&self, f: &Polynomial, p: u64, n: u32) -> Result<Vec<ResidueSet>> {
        check_prime(p)?;
        self.oracle.budget.check(checked_pow(p, n)? as u128)?;
        (0..=n)
            .map(|m| self.oracle.image(f, p.pow(m)))
            .collect()
    }

    /// The explicit solution of the N-set recurrence.
    pub fn corollary_explicit(&self, ctx: &PrimePowerContext, alpha_p: u64, sizes: &SizeProfile) -> Result<u64> {
        corollary_value(ctx, alpha_p, sizes)
    }

    /// `N_{pⁿ} = p^{kq}·N_{p^r}` where `n = qk + r`, `2 ≤ r ≤ k+1`.
    pub fn n_set_structured(
        &self,
        f: &DiagonalPolynomial,
        p: u64,
        n: u32,
        profile: &NSetProfile,
        exponent: ExponentSource,
    ) -> Result<ResidueSet> {
        self.check_scaling_hypotheses(f, p, exponent)?;
        if n < 2 {
            return Err(Error::InvalidArgument("structured N-sets start at level 2".into()));
        }
        let k = f.degree();
        let r = canonical_level(n, k);
        let q = (n - r) / k;
        let base = profile.base_set(r)?;
        base.scale(checked_pow(p, k * q)?, checked_pow(p, n)?)
    }

    /// Oracle N-sets at levels `2..=k+1`, checked against the structural
    /// inclusions that every such profile must satisfy.
    pub fn base_profile(&self, f: &DiagonalPolynomial, p: u64) -> Result<NSetProfile> {
        self.profile_to_level(f, p, f.degree() + 1)
    }

    /// Like [`base_profile`](Self::base_profile) but stops at level `top`,
    /// which is all the recurrence needs to reach `α(p^top)`.
    pub fn profile_to_level(&self, f: &DiagonalPolynomial, p: u64, top: u32) -> Result<NSetProfile> {
        let k = f.degree();
        let top = top.min(k + 1);
        let poly = Polynomial::Diagonal(f.clone());
        let images = self.image_tower(&poly, p, top.max(1))?;
        let mut sets = BTreeMap::new();
        for r in 2..=top {
            sets.insert(r, n_set(&images[r as usize], &images[r as usize - 1])?);
        }
        if f.coprime_to(p) {
            let s = p_adic_valuation(k as u64, p)?;
            let a_p = &images[1];
            for r in (2 * s + 2).max(2)..=top {
                let step = p.pow(r - 1);
                let allowed = ResidueSet::from_members(p.pow(r), (1..p).map(|j| j * step))?;
                if !sets[&r].is_subset(&allowed) {
                    return Err(Error::Consistency(format!(
                        "N_{{{p}^{r}}} = {} is not inside {{j·p^{}}}",
                        sets[&r],
                        r - 1
                    )));
                }
            }
            if 2 * s + 2 <= k + 1 && top == k + 1 {
                let top = &sets[&(k + 1)];
                let pk = p.pow(k);
                let non_members = (1..p).filter(|&j| !a_p.contains(j)).map(|j| j * pk);
                let bound = ResidueSet::from_members(pk * p, non_members)?;
                if !top.is_subset(&bound) {
                    return Err(Error::Consistency(format!(
                        "N_{{{p}^{}}} = {top} is not inside {{j·p^k : j ∉ A_p}}",
                        k + 1
                    )));
                }
                if self.scaling_exponent(f, p).is_some() && top != &bound {
                    return Err(Error::Consistency(format!(
                        "N_{{{p}^{}}} = {top} differs from {bound}",
                        k + 1
                    )));
                }
            }
        }
        let mut profile = NSetProfile::new(p, k, sets)?;
        profile.alpha_p = Some(images[1].len());
        Ok(profile)
    }

    /// α(n) by multiplicative assembly over the factorization of `n`.
    ///
    /// With `verify`, a second independent route recomputes the value; a
    /// disagreement is returned as [`Error::Mismatch`].
    pub fn alpha(&self, f: &Polynomial, n: u64, choice: MethodChoice, verify: bool) -> Result<AlphaResult> {
        let mut result = self.alpha_unchecked(f, n, choice)?;
        if verify {
            let second = match choice {
                MethodChoice::Oracle => MethodChoice::Auto,
                _ => MethodChoice::Oracle,
            };
            let other = self.alpha_unchecked(f, n, second)?;
            if other.value != result.value {
                return Err(Error::Mismatch {
                    n,
                    primary: result.method.to_string(),
                    left: result.value,
                    secondary: other.method.to_string(),
                    right: other.value,
                });
            }
            result.checked = Some(CrossCheck {
                against: other.method,
                agree: true,
            });
        }
        Ok(result)
    }

    fn alpha_unchecked(&self, f: &Polynomial, n: u64, choice: MethodChoice) -> Result<AlphaResult> {
        if n == 0 {
            return Err(Error::InvalidArgument("α is defined for n ≥ 1".into()));
        }
        if choice == MethodChoice::Oracle {
            return Ok(AlphaResult::new(self.oracle.alpha(f, n)?, Method::Oracle));
        }
        let mut value = 1u64;
        let mut methods = BTreeSet::new();
        for (p, e) in factorize(n)?.iter() {
            let part = self.alpha_prime_power(f, p, e, choice)?;
            value = value.checked_mul(part.value).ok_or(Error::Overflow("alpha"))?;
            methods.insert(part.method);
        }
        let method = match methods.len() {
            1 => methods.into_iter().next().expect("one method"),
            _ => Method::Multiplicative,
        };
        Ok(AlphaResult::new(value, method))
    }

    /// α(pᵉ) by the chosen route.
    pub fn alpha_prime_power(&self, f: &Polynomial, p: u64, e: u32, choice: MethodChoice) -> Result<AlphaResult> {
        let family = f.family();
        match choice {
            MethodChoice::Oracle => {
                let m = checked_pow(p, e)?;
                Ok(AlphaResult::new(self.oracle.alpha(f, m)?, Method::Oracle))
            }
            MethodChoice::Closed => match family {
                Some(fam) => self.alpha_closed(fam, p, e),
                None => Err(Error::Unsupported(format!("no closed form for {f}"))),
            },
            MethodChoice::Auto if family.is_some_and(|fam| Engine::has_closed_form(fam, p)) => {
                self.alpha_closed(family.expect("checked"), p, e)
            }
            MethodChoice::Auto | MethodChoice::Recurrence => {
                if let Some(d) = f.as_diagonal() {
                    if d.coprime_to(p) && self.scaling_exponent(d, p).is_some() {
                        let profile = self.profile_to_level(d, p, e)?;
                        return self.alpha_nr_recurrence(d, p, e, &profile.sizes(), ExponentSource::Certify);
                    }
                }
                self.alpha_oracle_recurrence(f, p, e)
            }
        }
    }

    /// Whether `f` is onto `ℤ_n`.
    pub fn is_surjective(&self, f: &Polynomial, n: u64) -> Result<bool> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let rule = f.as_diagonal().and_then(surjectivity_rule);
        Ok(match rule {
            Some(SurjectivityRule::TwoSquares) => {
                n % 4 != 0
                    && factorize(n)?
                        .iter()
                        .all(|(p, e)| p % 4 != 3 || e < 2)
            }
            Some(SurjectivityRule::ThreeSquares) => n % 8 != 0,
            Some(SurjectivityRule::Difference) => n % 4 != 0,
            Some(SurjectivityRule::Always) => true,
            None => self.alpha(f, n, MethodChoice::Auto, false)?.value == n,
        })
    }

    /// Membership of `a` in `A_{pⁿ}` decided from the base-`p` digits of `a`.
    pub fn member_digit_rule(&self, family: Family, p: u64, n: u32, a: u64) -> Result<bool> {
        check_prime(p)?;
        let modulus = checked_pow(p, n)?;
        if a >= modulus {
            return Err(Error::InvalidArgument(format!("{a} is outside I_{modulus}")));
        }
        let digits = base_digits(a, p, n);
        let lowest = digits.iter().position(|&d| d != 0);
        let digit = |i: usize| digits.get(i).copied().unwrap_or(0);
        match (family, p % 4) {
            // the first two nonzero binary digits are not adjacent
            (Family::SumOfTwoSquares, _) if p == 2 => Ok(lowest.is_none_or(|i| digit(i + 1) == 0)),
            // the first nonzero digit sits at an even position
            (Family::SumOfTwoSquares, 3) => Ok(lowest.is_none_or(|i| i % 2 == 0)),
            (Family::SumOfTwoSquares, 1) => Ok(true),
            // excluded: 2ⁱ + 2^{i+1} + 2^{i+2} + higher digits, with i even
            (Family::SumOfThreeSquares, _) if p == 2 => {
                Ok(lowest.is_none_or(|i| !(i % 2 == 0 && digit(i + 1) == 1 && digit(i + 2) == 1 && i + 2 < n as usize)))
            }
            (Family::SumOfThreeSquares, _) => Ok(true),
            (Family::DifferenceOfSquares, _) if p == 2 => Ok(n < 2 || a % 4 != 2),
            (Family::DifferenceOfSquares, _) => Ok(true),
            _ => Err(Error::Unsupported(format!("no digit rule for {family} at p = {p}"))),
        }
    }

    /// An exponent of `p` in `f` that divides `k`, when one is certified.
    fn scaling_exponent(&self, f: &DiagonalPolynomial, p: u64) -> Option<u32> {
        certified_exponent(f.family()?, p)
    }

    fn check_scaling_hypotheses(&self, f: &DiagonalPolynomial, p: u64, exponent: ExponentSource) -> Result<()> {
        check_prime(p)?;
        if !f.coprime_to(p) {
            return Err(Error::Precondition(format!("{p} divides a coefficient of {f}")));
        }
        match exponent {
            ExponentSource::Certify => self.scaling_exponent(f, p).map(|_| ()).ok_or_else(|| {
                Error::Uncertified(format!(
                    "no exponent of {p} in {f} dividing {} is certified; use the oracle recurrence",
                    f.degree()
                ))
            }),
            ExponentSource::Assert(e) if e >= 1 && f.degree() % e == 0 => Ok(()),
            ExponentSource::Assert(e) => Err(Error::Precondition(format!(
                "asserted exponent {e} does not divide k = {}",
                f.degree()
            ))),
        }
    }
}

fn closed_value(family: Family, p: u64, n: u32) -> Result<u64> {
    if n == 0 {
        return Ok(1);
    }
    let pow = |e: u32| -> Result<u128> { (p as u128).checked_pow(e).ok_or(Error::Overflow("closed form")) };
    let v: u128 = match family {
        Family::SumOfTwoSquares if p == 2 => pow(n - 1)? + 1,
        Family::SumOfTwoSquares if p % 4 == 1 => pow(n)?,
        Family::SumOfTwoSquares if n % 2 == 1 => p as u128 * (pow(n)? + 1) / (p as u128 + 1),
        Family::SumOfTwoSquares => (pow(n + 1)? + 1) / (p as u128 + 1),
        Family::SumOfThreeSquares if p == 2 && n % 2 == 1 => (5 * pow(n - 1)? + 1) / 3,
        Family::SumOfThreeSquares if p == 2 => 2 * (5 * pow(n - 2)? + 1) / 3,
        Family::SumOfThreeSquares => pow(n)?,
        Family::DifferenceOfSquares if p == 2 && n == 1 => 2,
        Family::DifferenceOfSquares if p == 2 => 3 * pow(n - 2)?,
        Family::DifferenceOfSquares => pow(n)?,
        Family::Power(k) => {
            if k == 0 || (k as u64) % p == 0 {
                return Err(Error::Unsupported(format!(
                    "closed form for x^{k} needs p ∤ k (p = {p}); use the oracle recurrence"
                )));
            }
            let d = gcd(k as u64, p - 1) as u128;
            let r = (n - 1) % k + 1;
            let repunit = (pow(k)? - 1) / (p as u128 - 1);
            let num = pow(n + k - 1)? - pow(r - 1)?;
            let den = d * repunit;
            if num % den != 0 {
                return Err(Error::Consistency(format!("x^{k} closed form is not integral at {p}^{n}")));
            }
            num / den + 1
        }
    };
    u64::try_from(v).map_err(|_| Error::Overflow("closed form"))
}

fn corollary_value(ctx: &PrimePowerContext, alpha_p: u64, sizes: &SizeProfile) -> Result<u64> {
    let (p, n, k) = (ctx.p as i128, ctx.n, ctx.k);
    let pow = |e: u32| -> Result<i128> { p.checked_pow(e).ok_or(Error::Overflow("corollary")) };
    // Σ_{j=2}^{k+1} n_j p^{k−j+1}
    let mut weighted = 0i128;
    for j in 2..=k + 1 {
        weighted += sizes.get(j)? as i128 * pow(k + 1 - j)?;
    }
    let lead = pow(n - 1)? * alpha_p as i128;
    let denom = pow(k)? - 1;
    let value = if (n - 1) % k == 0 {
        lead - (pow(n - 1)? - 1) / denom * weighted
    } else {
        let r = (n - 1) % k + 1;
        let tail: i128 = (2..=r)
            .map(|j| Ok(sizes.get(j)? as i128 * pow(r - j)?))
            .sum::<Result<i128>>()?;
        lead - (pow(n - 1)? - pow(r - 1)?) / denom * weighted - tail
    };
    u64::try_from(value).map_err(|_| Error::Consistency(format!("corollary gave {value}")))
}

/// Little-endian base-`p` digits of `a`, padded to `n` places.
pub fn base_digits(a: u64, p: u64, n: u32) -> Vec<u64> {
    let mut a = a;
    (0..n)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}
