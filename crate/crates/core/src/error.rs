use thiserror::Error;

/// Errors raised by the algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("unknown vertex or edge `{0}`")]
    UnknownName(String),
    #[error("path does not compose: {0}")]
    NotComposable(String),
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cycle {cycle} is reachable into `{vertex}` without a forbidden edge")]
    CycleReachable { vertex: String, cycle: String },
    #[error("graph is not no-exit: cycle {0} has an exit")]
    NotNoExit(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field {0} is not positive definite")]
    NotPositiveDefinite(String),
    #[error("elements belong to different graphs")]
    MixedGraphs,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("matrix is not a projection")]
    NotProjection,
    #[error("entry `{0}` has no preimage in the Laurent ring")]
    NotLaurent(String),
    #[error("entry `{0}` of a sink block is not a constant")]
    NotConstant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
