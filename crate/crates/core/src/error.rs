use thiserror::Error;

/// Everything that can go wrong while building or analysing an operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },

    #[error("entry at ({row}, {col}) is {value}, outside 0..{q}")]
    EntryOutOfRange { row: usize, col: usize, value: i64, q: usize },

    #[error("alphabet size {q} exceeds the limit of {max}")]
    AlphabetTooLarge { q: usize, max: usize },

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("operation is not uniformity preserving")]
    NotUniformityPreserving,

    #[error("operation is not a quasigroup")]
    NotQuasigroup,

    #[error("operation is not irreducible")]
    NotIrreducible,

    #[error("operation is not ergodic")]
    NotErgodic,

    #[error("operation is not strongly ergodic")]
    NotStronglyErgodic,

    #[error("partition is not stable under the operation")]
    NotStable,

    #[error("family is not a cover of the alphabet")]
    NotACover,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("subset must be nonempty")]
    EmptySet,

    #[error("no repeat found within {0} iterations")]
    IterationBudgetExceeded(usize),

    #[error("matrix monoid exceeded {0} states")]
    StateBudgetExceeded(usize),

    #[error("no witness found within length bound {0}")]
    InconclusiveWithinBound(usize),

    #[error("product alphabet of size {size} exceeds the limit of {max}")]
    ProductTooLarge { size: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("every factor must be ergodic")]
    NotErgodicFactors,

    #[error("not an H-sequence: {0}")]
    NotHSequence(String),

    #[error("first residue verification failed: {0}")]
    ResidueVerificationFailed(String),

    #[error("product decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("internal verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse grouping used by front ends to choose an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad or unsuitable input.
    Input,
    /// A configured budget or size cap was hit.
    Cap,
    /// A proven invariant failed to hold; indicates a bug.
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::AlphabetTooLarge { .. }
            | Error::IterationBudgetExceeded(_)
            | Error::StateBudgetExceeded(_)
            | Error::InconclusiveWithinBound(_)
            | Error::ProductTooLarge { .. } => ErrorKind::Cap,
            Error::ResidueVerificationFailed(_)
            | Error::DecompositionFailed(_)
            | Error::VerificationFailed(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
