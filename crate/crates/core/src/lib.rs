//! Image sets of diagonal polynomials modulo `n`.
//!
//! For `f = c₁x₁ᵏ + ⋯ + cₜxₜᵏ` this crate computes the set `A_n` of residues
//! hit by `f` modulo `n`, its size `α(n)`, the N-sets that drive the prime
//! power recurrence for `α`, and surjectivity of `f` on `ℤ_n`.
//!
//! ```
//! use congruence_images::{Engine, Family, MethodChoice, Polynomial};
//!
//! let f: Polynomial = Family::SumOfTwoSquares.into();
//! let r = Engine::default().alpha(&f, 45, MethodChoice::Auto, true).unwrap();
//! assert_eq!(r.value, 35);
//! ```

pub mod arith;
pub mod classify;
pub mod cli;
pub mod engine;
mod error;
pub mod oracle;
pub mod poly;
pub mod residue;

pub use engine::{AlphaResult, CrossCheck, Engine, ExponentSource, Method, MethodChoice, PrimePowerContext};
pub use error::{Error, Result};
pub use oracle::{Budget, Oracle, RepresentationKind, Witness};
pub use poly::{DiagonalPolynomial, Family, GeneralPolynomial, Polynomial, Term};
pub use residue::{NSetProfile, ResidueSet, SizeProfile};
