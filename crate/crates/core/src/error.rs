use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("cannot parse field element {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("formula denominator vanishes in {formula} at offset {offset}")]
    VanishingDenominator { formula: String, offset: i64 },
    #[error("operator {0} is required but absent")]
    MissingOperator(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("modules live over different fields or orbits")]
    ContextMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
