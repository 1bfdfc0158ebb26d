//! Residue sets over `I_n = {0, …, n−1}` packed into 64-bit words.
//!
//! Every operation returns a fresh set. The cyclic sumset ORs together one
//! word-level rotation of the right operand per member of the left operand,
//! which costs `O(n·|a| / 64)` word operations.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const W: usize = 64;

/// A subset of `I_n` for a fixed modulus `n ≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: u64,
    words: Vec<u64>,
}

impl ResidueSet {
    pub fn empty(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be at least 1".into()));
        }
        let len = usize::try_from(modulus)
            .map_err(|_| Error::Overflow("residue set size"))?
            .div_ceil(W);
        Ok(ResidueSet {
            modulus,
            words: vec![0; len],
        })
    }

    /// The whole of `I_n`.
    pub fn full(modulus: u64) -> Result<Self> {
        let mut set = Self::empty(modulus)?;
        set.words.iter_mut().for_each(|w| *w = !0);
        set.mask_tail();
        Ok(set)
    }

    pub fn from_members<I: IntoIterator<Item = u64>>(modulus: u64, members: I) -> Result<Self> {
        let mut set = Self::empty(modulus)?;
        for a in members {
            if a >= modulus {
                return Err(Error::InvalidArgument(format!(
                    "residue {a} is outside I_{modulus}"
                )));
            }
            set.insert(a);
        }
        Ok(set)
    }

    /// Builds a set from arbitrary integers, reducing each into `I_n`.
    pub fn from_values<I: IntoIterator<Item = u64>>(modulus: u64, values: I) -> Result<Self> {
        let mut set = Self::empty(modulus)?;
        for a in values {
            set.insert(a % modulus);
        }
        Ok(set)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.modulus
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.modulus && (self.words[a as usize / W] >> (a as usize % W)) & 1 == 1
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i * W) as u64;
            BitIter(w).map(move |b| base + b as u64)
        })
    }

    pub fn members(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub(crate) fn insert(&mut self, a: u64) {
        debug_assert!(a < self.modulus);
        self.words[a as usize / W] |= 1 << (a as usize % W);
    }

    fn mask_tail(&mut self) {
        let rem = (self.modulus as usize) % W;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn check_same(&self, other: &ResidueSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.check_same(other)?;
        Ok(self.zip_words(other, |a, b| a | b))
    }

    pub fn intersection(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.check_same(other)?;
        Ok(self.zip_words(other, |a, b| a & b))
    }

    pub fn difference(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.check_same(other)?;
        Ok(self.zip_words(other, |a, b| a & !b))
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.modulus == other.modulus
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ResidueSet) -> bool {
        self.modulus == other.modulus
            && self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// `I_n` minus this set.
    pub fn complement(&self) -> ResidueSet {
        let mut out = self.clone();
        out.words.iter_mut().for_each(|w| *w = !*w);
        out.mask_tail();
        out
    }

    /// `{−a mod n : a ∈ self}`.
    pub fn negate(&self) -> ResidueSet {
        let mut out = ResidueSet {
            modulus: self.modulus,
            words: vec![0; self.words.len()],
        };
        for a in self.iter() {
            out.insert((self.modulus - a) % self.modulus);
        }
        out
    }

    /// Reduces every member modulo `m` for a divisor `m` of the modulus.
    pub fn restrict(&self, m: u64) -> Result<ResidueSet> {
        if m == 0 || self.modulus % m != 0 {
            return Err(Error::NotDivisible {
                divisor: m,
                modulus: self.modulus,
            });
        }
        ResidueSet::from_values(m, self.iter())
    }

    fn zip_words(&self, other: &ResidueSet, op: impl Fn(u64, u64) -> u64) -> ResidueSet {
        ResidueSet {
            modulus: self.modulus,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// `A_n(m)`: every residue of `I_n` congruent mod `m` to a member of this set.
    pub fn lift(&self, n: u64) -> Result<ResidueSet> {
        let m = self.modulus;
        if n == 0 || n % m != 0 {
            return Err(Error::NotDivisible { divisor: m, modulus: n });
        }
        let mut out = ResidueSet::empty(n)?;
        for a in self.iter() {
            let mut x = a;
            while x < n {
                out.insert(x);
                x += m;
            }
        }
        Ok(out)
    }

    /// `{factor·a : a ∈ self}` as a subset of `I_target`, where `target = factor·m`.
    pub fn scale(&self, factor: u64, target: u64) -> Result<ResidueSet> {
        if factor == 0 || self.modulus.checked_mul(factor) != Some(target) {
            return Err(Error::ModulusMismatch {
                expected: self.modulus.saturating_mul(factor),
                found: target,
            });
        }
        let mut out = ResidueSet::empty(target)?;
        for a in self.iter() {
            out.insert(a * factor);
        }
        Ok(out)
    }

    /// `{(x + y) mod n : x ∈ self, y ∈ other}`.
    pub fn cyclic_sumset(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.check_same(other)?;
        // rotate the larger set once per member of the smaller one
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = ResidueSet {
            modulus: self.modulus,
            words: vec![0; self.words.len()],
        };
        for (i, x) in small.iter().enumerate() {
            acc.or_rotated(large, x);
            if i % 32 == 31 && acc.is_full() {
                break;
            }
        }
        Ok(acc)
    }

    /// ORs `src` rotated upward by `shift` (mod n) into `self`.
    fn or_rotated(&mut self, src: &ResidueSet, shift: u64) {
        let n = self.modulus as usize;
        let shift = shift as usize % n;
        if shift == 0 {
            for (d, s) in self.words.iter_mut().zip(&src.words) {
                *d |= s;
            }
            return;
        }
        or_shl(&mut self.words, &src.words, shift);
        or_shr(&mut self.words, &src.words, n - shift);
        self.mask_tail();
    }

    /// Little-endian bit string: byte `j` bit `b` is residue `8j + b`.
    pub fn to_hex(&self) -> String {
        let nbytes = (self.modulus as usize).div_ceil(8);
        let bytes: Vec<u8> = self
            .words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(nbytes)
            .collect();
        hex::encode(bytes)
    }

    pub fn from_hex(modulus: u64, text: &str) -> Result<ResidueSet> {
        let bytes = hex::decode(text.trim())
            .map_err(|e| Error::InvalidArgument(format!("bad hex bit string: {e}")))?;
        let mut set = ResidueSet::empty(modulus)?;
        if bytes.len() != (modulus as usize).div_ceil(8) {
            return Err(Error::InvalidArgument(format!(
                "bit string has {} bytes, modulus {modulus} needs {}",
                bytes.len(),
                (modulus as usize).div_ceil(8)
            )));
        }
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            set.words[i] = u64::from_le_bytes(buf);
        }
        let before = set.words.clone();
        set.mask_tail();
        if before != set.words {
            return Err(Error::InvalidArgument(
                "bit string has members at or above the modulus".into(),
            ));
        }
        Ok(set)
    }
}

// dst |= (src << shift), truncated to dst's length
fn or_shl(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / W, shift % W);
    let len = dst.len();
    for (i, &word) in src.iter().enumerate().take(len.saturating_sub(ws)) {
        let j = i + ws;
        dst[j] |= word << bs;
        if bs > 0 && j + 1 < len {
            dst[j + 1] |= word >> (W - bs);
        }
    }
}

// dst |= (src >> shift)
fn or_shr(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / W, shift % W);
    let len = src.len();
    for i in 0..len.saturating_sub(ws) {
        let lo = src[i + ws] >> bs;
        let hi = if bs > 0 && i + ws + 1 < len {
            src[i + ws + 1] << (W - bs)
        } else {
            0
        };
        dst[i] |= lo | hi;
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self, self.modulus)
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct ResidueSetRepr {
    modulus: u64,
    members: Vec<u64>,
}

impl Serialize for ResidueSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ResidueSetRepr {
            modulus: self.modulus,
            members: self.members(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ResidueSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ResidueSetRepr::deserialize(deserializer)?;
        if repr.members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom("members must be strictly ascending"));
        }
        ResidueSet::from_members(repr.modulus, repr.members).map_err(serde::de::Error::custom)
    }
}

/// `N_{pⁿ} = A_{pⁿ}(p^{n−1}) \ A_{pⁿ}`, given `upper = A_{pⁿ}` and `lower = A_{p^{n−1}}`.
pub fn n_set(upper: &ResidueSet, lower: &ResidueSet) -> Result<ResidueSet> {
    let m = lower.modulus();
    if upper.modulus() % m != 0 || !crate::arith::is_prime(upper.modulus() / m) {
        return Err(Error::ModulusMismatch {
            expected: m,
            found: upper.modulus(),
        });
    }
    lower.lift(upper.modulus())?.difference(upper)
}

/// Base N-sets `N_{p^r}` for `r = 2..=k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSetProfile {
    pub p: u64,
    pub k: u32,
    /// `|A_p|`, when known alongside the N-sets.
    pub alpha_p: Option<u64>,
    base_sets: BTreeMap<u32, ResidueSet>,
}

impl NSetProfile {
    pub fn new(p: u64, k: u32, base_sets: BTreeMap<u32, ResidueSet>) -> Result<Self> {
        for (&r, set) in &base_sets {
            let expected = crate::arith::checked_pow(p, r)?;
            if set.modulus() != expected {
                return Err(Error::ModulusMismatch {
                    expected,
                    found: set.modulus(),
                });
            }
        }
        Ok(NSetProfile {
            p,
            k,
            alpha_p: None,
            base_sets,
        })
    }

    pub fn base_set(&self, r: u32) -> Result<&ResidueSet> {
        self.base_sets.get(&r).ok_or(Error::MissingLevel(r))
    }

    pub fn base_sets(&self) -> &BTreeMap<u32, ResidueSet> {
        &self.base_sets
    }

    /// `n_r = |N_{p^r}|`.
    pub fn base_size(&self, r: u32) -> Result<u64> {
        self.base_set(r).map(ResidueSet::len)
    }

    pub fn base_sizes(&self) -> BTreeMap<u32, u64> {
        self.base_sets.iter().map(|(&r, s)| (r, s.len())).collect()
    }

    pub fn sizes(&self) -> SizeProfile {
        SizeProfile {
            p: self.p,
            k: self.k,
            alpha_p: self.alpha_p,
            sizes: self.base_sizes(),
        }
    }
}

/// Only the counts `n_r` of a profile; enough to drive the α recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeProfile {
    pub p: u64,
    pub k: u32,
    /// `|A_p|`; computed by the oracle when absent.
    pub alpha_p: Option<u64>,
    pub sizes: BTreeMap<u32, u64>,
}

impl SizeProfile {
    pub fn new(p: u64, k: u32, sizes: &[(u32, u64)]) -> Self {
        SizeProfile {
            p,
            k,
            alpha_p: None,
            sizes: sizes.iter().copied().collect(),
        }
    }

    pub fn with_alpha_p(mut self, alpha_p: u64) -> Self {
        self.alpha_p = Some(alpha_p);
        self
    }

    pub fn get(&self, r: u32) -> Result<u64> {
        self.sizes.get(&r).copied().ok_or(Error::MissingLevel(r))
    }
}
