use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivByZeroSpan { lo: f64, hi: f64 },

    #[error("{func} is not defined on [{lo}, {hi}]")]
    Domain { func: &'static str, lo: f64, hi: f64 },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("cannot split a zero-width coordinate ({0})")]
    DegenerateDimension(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("midpoint matrix is numerically singular")]
    SingularMidpoint,

    #[error("per-order coefficient bounds have empty intersection (mode {mode}, {part})")]
    EmptyIntersection { mode: usize, part: &'static str },

    #[error("Newton iteration did not converge (residual {residual:e} after {iterations} steps)")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), msg: err.to_string() }
    }
}
