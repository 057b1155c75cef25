//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong when building or analyzing distributions,
/// decompositions and gadgets.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wire count {n} outside supported range 1..=24")]
    BadWireCount { n: usize },

    #[error("pattern mask {mask:#b} does not fit in {n} wires")]
    PatternOutOfRange { mask: u32, n: usize },

    #[error("invalid pattern character {c:?} (expected '0' or '1')")]
    BadPatternChar { c: char },

    #[error("probability for {what} is negative or exceeds one")]
    ProbabilityOutOfRange { what: String },

    #[error("distribution mass sums to {sum} instead of one")]
    NotNormalized { sum: String },

    #[error("mixture weights must be nonnegative and sum to one")]
    BadMixtureWeights,

    #[error("register size mismatch: expected {expected} wires, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error(
        "wire {wire} has zero product rate but carries error mass {mass}; \
         no product mixture at this rate vector can cover it"
    )]
    ZeroRateWire { wire: usize, mass: String },

    #[error("no uniform rate up to {q_max} admits a product-mixture decomposition")]
    InfeasibleUniformRate { q_max: String },

    #[error("quotient register must have exactly 4 wires, got {got}")]
    QuotientWidth { got: usize },

    #[error("distribution has mass {mass} on patterns of weight three or four, which the embedding never produces")]
    UnembeddableMass { mass: String },

    #[error("gadget validation failed: {reason}")]
    BadGadget { reason: String },

    #[error("gadget rejects every error pattern; there is no accepted output to condition on")]
    AlwaysRejects,

    #[error("state-vector register limited to 14 qubits, got {got}")]
    TooManyQubits { got: usize },

    #[error("exhaustive membership oracle limited to 6 wires, got {got}")]
    OracleTooWide { got: usize },

    #[error("postselected measurement outcome has zero amplitude")]
    ZeroAmplitudeBranch,

    #[error("linear system is singular; vertex matrix should be invertible for rates in (0,1)")]
    SingularSystem,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// Convenience constructor for gadget validation failures.
    pub fn bad_gadget(reason: impl Into<String>) -> Self {
        Error::BadGadget {
            reason: reason.into(),
        }
    }
}
