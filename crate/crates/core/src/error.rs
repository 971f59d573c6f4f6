use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Following parent links from the given vertex never reaches the root.
    #[error("cycle detected: parent chain from vertex {0} never reaches the root")]
    CycleDetected(usize),

    /// The "no parent" marker is missing at the root or present elsewhere.
    #[error("root marker violation: vertex {vertex} has no parent but the root is {root}")]
    MultipleRoots { vertex: usize, root: usize },

    /// A label is outside the expected range `0..=n`.
    #[error("label {label} out of range 0..={max}")]
    BadLabelRange { label: usize, max: usize },

    /// An exhaustive enumeration was requested above the configured cap.
    #[error("enumeration of n={n} exceeds the cap {cap}")]
    LimitExceeded { n: usize, cap: usize },

    /// Arguments outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A function is not a member of the set required by a bijection.
    #[error("not a member: {0}")]
    NotMember(String),

    /// Matrix/vector dimensions do not conform.
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    /// Series truncation orders do not match.
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// The series argument must have zero constant term.
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,

    /// The series argument must have constant term 1.
    #[error("series constant term is not 1")]
    BadConstantTerm,
}

pub type Result<T> = std::result::Result<T, Error>;
