use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("modulus {divisor} does not divide {modulus}")]
    NotDivisible { divisor: u64, modulus: u64 },

    #[error("modulus mismatch: expected {expected}, got {found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("enumeration of {required} points exceeds the oracle budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no certified exponent: {0}")]
    Uncertified(String),

    #[error("N-set profile has no level {0}")]
    MissingLevel(u32),

    /// A structural identity that must hold failed; indicates a bug, not bad input.
    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("cross-check mismatch at n = {n}: {primary} gave {left}, {secondary} gave {right}")]
    Mismatch {
        n: u64,
        primary: String,
        left: u64,
        secondary: String,
        right: u64,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
