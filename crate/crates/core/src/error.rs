use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("derived order {order} exceeds polynomial weight {weight}")]
    OrderOutOfRange { order: usize, weight: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("bidegree mismatch: expected ({0},{1}), found ({2},{3})", expected.0, expected.1, found.0, found.1)]
    BidegreeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("elements belong to different ring models")]
    ModelMismatch,

    #[error("form is not real: {0}")]
    NotReal(String),

    #[error("top-degree integral has non-vanishing imaginary part {imag}")]
    ImaginaryIntegral { imag: f64 },

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("degenerate frame: vectors are linearly dependent")]
    DegenerateFrame,

    #[error("singular linear map; kernel witness {witness:?}")]
    Singular { witness: Vec<String> },

    #[error("ring construction failed: {0}")]
    Construction(String),

    #[error("inconsistent relations: monomial {monomial} reduces to both {first} and {second}")]
    InconsistentRelations {
        monomial: String,
        first: String,
        second: String,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid JSON input: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
