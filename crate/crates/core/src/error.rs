//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HopfError {
    /// Malformed or out-of-contract input (empty word, size mismatch, bad parameter).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A generator of degree > 1 has vanishing reduced coproduct, so no basis
    /// rescaling can turn the power map into a transition matrix.
    #[error("no Markov rescaling: generator {generator} of degree {degree} is primitive (reduced coproduct vanishes)")]
    NoMarkovRescaling { generator: String, degree: u32 },

    /// A generator coproduct carries a negative coefficient.
    #[error("not nonnegative: coproduct of generator {generator} has a negative coefficient")]
    NotNonnegative { generator: String },

    /// Input exceeds a hard size cap (graph/complex vertex counts, q-shuffle deck size).
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// The requested quantity is not defined for this chain (e.g. quasi-stationary
    /// distribution when the second eigenvalue is not simple).
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// The instance kind is outside the supported algebra classes.
    #[error("not supported: {0}")]
    NotSupported(String),

    /// An internal certificate failed; indicates a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Operation requested above the instance's working degree.
    #[error("degree {requested} above working degree {working}")]
    AboveWorkingDegree { requested: u32, working: u32 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HopfError>;
