use thiserror::Error;

/// Errors raised by graph construction, matrix assembly and the analyses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("edge weight must be finite and nonzero, got {0}")]
    InvalidWeight(f64),

    #[error("operation requires a simple unweighted graph")]
    NotSimpleUnweighted,

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("invalid blow-up: {0}")]
    InvalidBlowUp(String),

    #[error("vertex {vertex} has negative degree {degree}; normalized matrices need deg >= 0")]
    NegativeDegree { vertex: usize, degree: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no certified period for vertex {0}; pass an explicit window")]
    NoCertifiedWindow(usize),

    #[error("certificate refused: a = {a} ({reason})")]
    CertificateRefused { a: f64, reason: &'static str },

    #[error("reports use different matrix kinds: {0} and {1}")]
    MixedMatrixKinds(String, String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
