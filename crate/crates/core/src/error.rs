use thiserror::Error;

use crate::conservation::Contradiction;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or out-of-domain input.
    Usage,
    /// The request is well formed but mathematically impossible or inconsistent.
    Mathematical,
    /// An enumeration would exceed the configured size cap.
    Cap,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid classical signature {signature}: {clause}")]
    InvalidSignature { signature: String, clause: String },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),

    #[error("expected {expected}, got {got}")]
    KindMismatch { expected: String, got: String },

    #[error("negative Witt rank {0}")]
    NegativeRank(i64),

    #[error("towers from different families: {0} and {1}")]
    FamilyMismatch(String, String),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(u32, u32),

    #[error("not a dual pair: {0}")]
    PairMismatch(String),

    #[error("labels are not Howe dual: {0} and {1}")]
    LabelMismatch(String, String),

    #[error("orbit is not in the moment image: {0}")]
    NotInMomentImage(String),

    #[error("no candidate orbit: {0}")]
    NoCandidate(String),

    #[error("maximum is not unique; maximal candidates: {}", .0.join(", "))]
    AmbiguousMaximum(Vec<String>),

    #[error("kappa is negative ({0}); outside the good-descent regime")]
    NegativeKappa(i64),

    #[error("eigenvalue {0} is not positive")]
    NonPositiveEigenvalue(String),

    #[error("eigenvalue multiset is not closed under inversion")]
    NotInversionClosed,

    #[error("ledger side mismatch: {0}")]
    SideMismatch(String),

    #[error("{0}")]
    Contradiction(Box<Contradiction>),

    #[error("enumeration size {requested} exceeds cap {cap}")]
    CapExceeded { requested: u32, cap: u32 },
}

impl ThetaError {
    pub fn class(&self) -> ErrorClass {
        match self {
            ThetaError::NotInMomentImage(_)
            | ThetaError::NoCandidate(_)
            | ThetaError::AmbiguousMaximum(_)
            | ThetaError::NegativeKappa(_)
            | ThetaError::Contradiction(_) => ErrorClass::Mathematical,
            ThetaError::CapExceeded { .. } => ErrorClass::Cap,
            _ => ErrorClass::Usage,
        }
    }
}

impl From<Contradiction> for ThetaError {
    fn from(c: Contradiction) -> Self {
        ThetaError::Contradiction(Box::new(c))
    }
}
