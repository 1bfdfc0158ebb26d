//! Exact integer utilities on 64-bit words.
//!
//! Products are formed in 128 bits, so every modulus up to `u64::MAX` is safe.
//! Factorization uses trial division below 10⁶ and falls back to Brent's
//! variant of Pollard rho (with a deterministic Miller–Rabin test) on the
//! remaining cofactor.

use num_integer::Integer;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// The prime powers `pᵉ` of the factorization, in increasing prime order.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, e)| p.pow(e))
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn floor_mod(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// `base^exp mod m`, with `base` reduced by floor-mod first. `m = 1` yields 0.
pub fn mod_pow(base: i64, exp: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    Ok(mod_pow_u64(floor_mod(base as i128, m), exp, m))
}

pub(crate) fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `base^exp`, or an overflow error if it does not fit in 64 bits.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or(Error::Overflow("prime power"))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Largest `s` with `pˢ | n`.
pub fn p_adic_valuation(n: u64, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidArgument("valuation of 0 is unbounded".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let (mut n, mut s) = (n, 0);
    while n % p == 0 {
        n /= p;
        s += 1;
    }
    Ok(s)
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = mod_pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factors `n ≥ 1`; `n = 1` gives the empty factorization.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factorize 0".into()));
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut push = |rest: &mut u64, p: u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(&mut rest, 2);
    let mut d = 3;
    while d <= TRIAL_LIMIT && d * d <= rest {
        push(&mut rest, d);
        d += 2;
    }
    if rest > 1 {
        if d * d > rest || is_prime(rest) {
            pairs.push((rest, 1));
        } else {
            let mut large = Vec::new();
            split_large(rest, &mut large);
            large.sort_unstable();
            for p in large {
                match pairs.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => pairs.push((p, 1)),
                }
            }
        }
    }
    Ok(Factorization { pairs })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

// n is odd, composite and free of factors below the trial limit.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut ys = y;
        let mut r = 1u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// The unique `x ∈ [0, m1·m2)` with `x ≡ a1 (mod m1)` and `x ≡ a2 (mod m2)`.
pub fn crt_pair(a1: u64, m1: u64, a2: u64, m2: u64) -> Result<u64> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidArgument("moduli must be at least 1".into()));
    }
    if gcd(m1, m2) != 1 {
        return Err(Error::NotCoprime(m1, m2));
    }
    if a1 >= m1 || a2 >= m2 {
        return Err(Error::InvalidArgument("residues must be reduced".into()));
    }
    let m = (m1 as u128)
        .checked_mul(m2 as u128)
        .filter(|&m| m <= u64::MAX as u128)
        .ok_or(Error::Overflow("CRT modulus"))? as u64;
    // x = a1 + m1 * ((a2 - a1) * m1⁻¹ mod m2)
    let inv = mod_inverse(m1 % m2, m2).expect("coprime moduli");
    let diff = floor_mod(a2 as i128 - a1 as i128, m2);
    let t = mul_mod(diff, inv, m2);
    Ok(((a1 as u128 + m1 as u128 * t as u128) % m as u128) as u64)
}

/// Inverse of `a` modulo `m`, if it exists. `m = 1` gives `Some(0)`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let ext = (a as i128).extended_gcd(&(m as i128));
    (ext.gcd == 1).then(|| floor_mod(ext.x, m))
}

/// Integer `k`-th root: largest `r` with `rᵏ ≤ n`.
pub fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    if k == 2 {
        return n.isqrt();
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}
