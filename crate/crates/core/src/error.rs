use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants are grouped by the exit code the command-line front end maps
/// them to (see [`KlError::exit_code`]).
#[derive(Debug, Error)]
pub enum KlError {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("word {word:?} is not reduced (product has length {length})")]
    NotReduced { word: Vec<usize>, length: usize },

    #[error("element with word {word:?} is not a minimal coset representative")]
    NotCosetRep { word: Vec<usize> },

    #[error("weight {weight:?} is not dominant")]
    NotDominant { weight: Vec<i64> },

    #[error("weight {weight:?} is not in the dot-orbit of -2rho: {reason}")]
    NotInOrbit { weight: Vec<i64>, reason: String },

    #[error("weight {weight:?} is not {p}-restricted")]
    NotRestricted { weight: Vec<i64>, p: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("corrupt checkpoint {path}: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },

    #[error("checkpoint fingerprint mismatch: file has {found}, job expects {expected}")]
    FingerprintMismatch { expected: String, found: String },

    #[error("checkpoint format version {found} is not supported (expected {expected})")]
    VersionMismatch { expected: u32, found: u32 },

    #[error("parity violation at {word:?}: coefficient {poly} (expected exponents ≡ {parity} mod 2)")]
    InternalParityViolation { word: Vec<usize>, poly: String, parity: u32 },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("run halted after wave {wave}; state saved to checkpoint")]
    Halted { wave: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl KlError {
    /// Process exit code used by the `klq` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            KlError::CorruptCheckpoint { .. }
            | KlError::FingerprintMismatch { .. }
            | KlError::VersionMismatch { .. } => 4,
            KlError::InternalParityViolation { .. } | KlError::InternalInvariant(_) => 5,
            KlError::Usage(_) => 2,
            KlError::Halted { .. } => 75,
            _ => 3,
        }
    }
}

pub type Result<T, E = KlError> = std::result::Result<T, E>;
