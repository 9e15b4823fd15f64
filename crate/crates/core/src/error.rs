use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice dimensions {rows}x{cols} are too small (need at least 2x2)")]
    InvalidDimension { rows: usize, cols: usize },

    #[error("{kind} index {index} out of range (size {len})")]
    OutOfRange { kind: &'static str, index: usize, len: usize },

    #[error("endpoints coincide at vertex {0}")]
    SameVertex(usize),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("configuration width {got} does not match lattice with {expected} edges")]
    WidthMismatch { expected: usize, got: usize },

    #[error("states belong to different lattices")]
    LatticeMismatch,

    #[error("operation annihilated the state")]
    ZeroState,

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("projector set is inconsistent: {0}")]
    InconsistentProjectors(String),

    #[error("state size budget exceeded: {0}")]
    SizeBudget(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("qubit {0} is not encoded")]
    Unencoded(usize),

    #[error("qubit {0} support is not in the ground state")]
    NotGroundState(usize),

    #[error("qubit index {0} out of range")]
    NoSuchQubit(usize),

    #[error("qubit supports overlap: {0}")]
    OverlappingSupports(String),

    #[error("encoded qubit {qubit} is corrupted: {detail}")]
    Corruption { qubit: usize, detail: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("repeat-until-success gave up after {0} rounds")]
    RoundLimit(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
