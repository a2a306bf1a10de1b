use thiserror::Error;

/// Errors raised by field construction, character evaluation, the family
/// generators and the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field size {p}^{n} exceeds the cap of {cap} elements")]
    FieldTooLarge { p: u64, n: u32, cap: u64 },

    #[error("modulus {0:?} is not a monic irreducible polynomial of the requested degree")]
    NotIrreducible(Vec<u32>),

    #[error("element {0:?} is not a primitive element of the field")]
    NotPrimitive(Vec<u32>),

    #[error("no irreducible polynomial of degree {n} over Z_{p} was found")]
    NoIrreducible { p: u32, n: u32 },

    #[error("malformed field element: {0}")]
    InvalidElement(String),

    #[error("{0}")]
    Domain(String),

    #[error("index {index} out of range (must be < {len})")]
    IndexOutOfRange { index: u64, len: u64 },

    #[error("root-of-unity order mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("{family} requires {requirement}")]
    Hypothesis {
        family: &'static str,
        requirement: String,
    },

    #[error("exhaustive run needs {required} operations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("invalid field description: {0}")]
    FieldFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
