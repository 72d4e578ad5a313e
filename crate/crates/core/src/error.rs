use thiserror::Error;

use crate::partitions::Partition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("modulus m must be at least 2, got {0}")]
    InvalidModulus(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions have different weights ({left} vs {right})")]
    WeightMismatch { left: usize, right: usize },

    #[error("{inner} is not contained in {outer} as a multiset")]
    NotSubPartition { outer: Partition, inner: Partition },

    #[error("elements over different moduli ({left} vs {right})")]
    ModulusMismatch { left: usize, right: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at specialization{}", partition.as_ref().map(|p| format!(" in the coefficient of {p}")).unwrap_or_default())]
    PoleAtSpecialization { partition: Option<Partition> },

    #[error("index {n} is divisible by the modulus {m}")]
    DivisibleByModulus { n: usize, m: usize },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("eigenvalues of {lambda} and {mu} coincide at the evaluation point; choose a different q0")]
    EigenvalueCollisionAtEvaluation { lambda: Partition, mu: Partition },

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("{0} is not m-reduced")]
    NotReduced(Partition),

    #[error("{0} is not strict")]
    NotStrict(Partition),

    #[error("operation requires symbolic parameters")]
    RequiresSymbolic,

    #[error("could not parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    /// A proven identity failed to hold. This is an implementation bug, not
    /// an input problem; the message carries the diagnostic dump.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
