use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{p}")]
    Reducible { p: u32 },
    #[error("the class of x is not a primitive element modulo the given polynomial")]
    NotPrimitiveModulus,
    #[error("field of size {size} exceeds the cap of {cap} elements")]
    FieldTooLarge { size: u128, cap: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("basis elements are linearly dependent over the subfield")]
    DependentBasis,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("enumeration of {what} needs {required} steps, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: BigUint,
        budget: u64,
    },
    #[error("code is rank-degenerate")]
    Degenerate,
    #[error("the F_q-space does not span the ambient space over the extension field")]
    NotSpanning,
    #[error("the system is not scattered")]
    NotScattered,
    #[error("no spanning hyperplane of the system was found")]
    NoSpanningSubspace,
    #[error("subspace is not linear over the extension field")]
    NotLinearOverExtension,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("input code is not minimal")]
    NotMinimalInput,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}
