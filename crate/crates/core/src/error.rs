use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a field; dual numbers are not a field")]
    NotAField,

    #[error("resource bound exceeded: {what} needs {size}, limit is {limit}")]
    ResourceBound { what: String, size: usize, limit: usize },

    #[error("truncation overflow: product of degree {degree} exceeds truncation degree {limit}")]
    TruncationOverflow { degree: usize, limit: usize },

    #[error("coalgebra has no distinguished group-like unit")]
    MissingUnit,

    #[error("coalgebra has no counit")]
    MissingCounit,

    #[error("antipode unavailable for basis element {0}")]
    MissingAntipode(String),

    #[error("structure is not cocommutative (first failure at {0})")]
    NotCocommutative(String),

    #[error("set-level self-distributivity fails at ({0}, {1}, {2})")]
    NotSelfDistributive(String, String, String),

    #[error("right Leibniz identity fails at ({0}, {1}, {2})")]
    NotLeibniz(String, String, String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("axiom violated: {0}")]
    AxiomViolation(String),

    #[error("coproduct unavailable: J is not a coideal at this truncation")]
    CoproductUnavailable,

    #[error("differential image escapes the coderivation space: {0}")]
    ImageEscapes(String),

    #[error("generator of J acts nonzero on C: {0}")]
    GeneratorActsNonzero(String),

    #[error("map does not vanish on J: {0}")]
    NotVanishing(String),

    #[error("unknown example: {0}")]
    UnknownExample(String),

    #[error("{field}: {message}")]
    Parse { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { field: field.into(), message: message.into() }
    }
}
