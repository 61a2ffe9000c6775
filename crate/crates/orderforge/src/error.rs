use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("signature mismatch between structures")]
    SignatureMismatch,
    #[error("domain mismatch: expected {expected} elements, got {got}")]
    DomainMismatch { expected: usize, got: usize },
    #[error("element {element} out of range for domain of size {n}")]
    OutOfRange { element: usize, n: usize },
    #[error("{what} exceeds bound: {got} > {limit}")]
    BoundExceeded {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("crown index must be at least 3, got {0}")]
    CrownTooSmall(usize),
    #[error("product factors must be nonempty")]
    ZeroFactor,
    #[error("map is not an embedding: {0}")]
    NotAnEmbedding(String),
    #[error("embedding fits neither order pairing; the two-order dichotomy failed")]
    Unclassifiable,
    #[error("structure is not a member of class {0}")]
    NotInClass(String),
    #[error("growth exhausted at {points} points; extension level reached: {ep_level}")]
    GrowthExhausted { points: usize, ep_level: usize },
    #[error("stage too small and growth is disabled; required extension: {0}")]
    GrowthDisabled(String),
    #[error("structure has no designated total order")]
    NoDesignatedOrder,
    #[error("no interval decomposition with at most {max_blocks} blocks at stage {stage}")]
    EmptyDecompositionLevel { stage: usize, max_blocks: usize },
    #[error("difference/ratio window must be at least 3, got {0}")]
    WindowTooSmall(usize),
    #[error("operation supports poset signatures only (a single binary relation)")]
    UnsupportedSignature,
    #[error("class file is not hereditary: {0}")]
    NotHereditary(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
