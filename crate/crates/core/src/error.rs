use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("non-integer exponent `{text}` at byte {offset}")]
    NonIntegerExponent { text: String, offset: usize },

    #[error("domain error in `{expr}` at ({x1}, {x2}, {x3}, {y})")]
    Domain {
        expr: String,
        x1: f64,
        x2: f64,
        x3: f64,
        y: f64,
    },

    #[error("sampler exhausted: only {valid} valid samples after {attempts} attempts")]
    SamplerExhausted { valid: usize, attempts: usize },

    #[error("wedge of grades {p} and {q} exceeds 4")]
    GradeOverflow { p: usize, q: usize },

    #[error("trace is not defined on grade {0}")]
    InvalidGrade(usize),

    #[error("matrix `{0}` is not symmetric")]
    NotSymmetric(&'static str),

    #[error("tensor does not vanish at the linearization point: {0}")]
    NotAZero(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("audit failure: identities {0:?} hold under neither sign")]
    AuditFailure(Vec<String>),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("invalid tensor file: {0}")]
    InvalidFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
