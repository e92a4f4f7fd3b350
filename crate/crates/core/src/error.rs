//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// Mathematical negatives (a map failing to be surjective, a lift failing to
/// extend) are *values*, not errors; errors are reserved for contract
/// violations and resource guards.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus polynomial is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("modulus {0} is too small (need m >= 2)")]
    ModulusTooSmall(u64),
    #[error("guard exceeded for {what}: {actual} > {limit} (scale with SWLAB_GUARD_SCALE)")]
    GuardExceeded {
        what: &'static str,
        actual: u128,
        limit: u128,
    },
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("ring has infinitely many elements")]
    InfiniteRing,
    #[error("operation requires a field, got {0}")]
    NotAField(String),
    #[error("operation requires the ring of integers, got {0}")]
    NotIntegers(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generator stream is empty")]
    EmptyStream,
    #[error("elements belong to different algebras")]
    OwnerMismatch,
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("entry ({i},{j}) has a non-homogeneous monomial: {monomial}")]
    NotHomogeneous {
        i: usize,
        j: usize,
        monomial: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("consistency violation: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that should map to the guard-violation exit code.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}
