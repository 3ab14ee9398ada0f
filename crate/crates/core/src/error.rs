//! Crate-wide error type.

use alloc::string::String;
use thiserror::Error;

/// Errors raised by the lattice and operator calculus.
///
/// Structural errors (mismatched spaces, malformed input) are distinguished
/// from enumeration guards (caps on exponential searches) and from
/// mathematical precondition failures (an operator that is not atomic or not
/// positive where the formula requires it).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space mismatch: `{left}` vs `{right}`")]
    SpaceMismatch { left: String, right: String },

    #[error("element carries {got} values but space `{space}` has {expected} points")]
    ValueCountMismatch {
        space: String,
        expected: usize,
        got: usize,
    },

    #[error("unknown point index {index} in space `{space}` ({points} points)")]
    UnknownPoint {
        space: String,
        index: usize,
        points: usize,
    },

    #[error("space `{name}` is invalid: {reason}")]
    InvalidSpace { name: String, reason: String },

    #[error("support size {support} exceeds the enumeration cap {cap}")]
    SupportCapExceeded { support: usize, cap: usize },

    #[error("Boolean algebra on {points} points exceeds the exhaustive-check cap {cap}")]
    AlgebraCapExceeded { points: usize, cap: usize },

    #[error("set-partition enumeration on {points} points exceeds the cap {cap}")]
    PartitionCapExceeded { points: usize, cap: usize },

    #[error("{candidate} is not a fragment of {of}")]
    NotAFragment { candidate: String, of: String },

    #[error("kernel entry ({source_point}, {target_point}) does not vanish at zero (value {value})")]
    KernelNotNormalized {
        source_point: String,
        target_point: String,
        value: String,
    },

    #[error("division by zero while evaluating a kernel expression")]
    DivisionByZero,

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("operator is not atomic subordinate to the homomorphism ({witnesses} witness(es))")]
    NotAtomic { witnesses: usize },

    #[error("operator failed positivity sampling: {detail}")]
    NotPositive { detail: String },

    #[error("point map is not a bijection, so the homomorphism is not an isomorphism")]
    NotIsomorphism,

    #[error("element is not a member of the lateral ideal")]
    NotInIdeal,

    #[error("lateral ideal violates closure under {law}: witness {witness}")]
    IdealClosureViolation { law: String, witness: String },

    #[error("operation `{op}` expects {expected} operand(s), got {got}")]
    ArityMismatch {
        op: String,
        expected: usize,
        got: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
