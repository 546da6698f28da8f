use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into validation problems (bad input, bad configuration) and
/// numerical failures raised while stepping; [`Error::is_numerical`] tells
/// them apart so callers can map them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: x_left ({x_left}) must be smaller than x_right ({x_right})")]
    InvalidDomain { x_left: f64, x_right: f64 },

    #[error("domain length {length} is not an integer multiple of dx = {dx}")]
    NonIntegerCellCount { length: f64, dx: f64 },

    #[error("parameter `{name}` must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("parameter `{0}` must not be negative")]
    NegativeParameter(&'static str),

    #[error("parameter `{name}` is not used by the {variant} variant")]
    UnusedParameter {
        name: &'static str,
        variant: &'static str,
    },

    #[error("parameter `{name}` is required by the {variant} variant")]
    MissingParameter {
        name: &'static str,
        variant: &'static str,
    },

    #[error("jump position {x_jump} lies outside the open domain ({x_left}, {x_right})")]
    JumpOutsideDomain { x_jump: f64, x_left: f64, x_right: f64 },

    #[error("state tuple has {got} components, the {variant} variant needs {expected}")]
    StateArity {
        variant: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid must have at least {min} cells, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("time control: {0}")]
    InvalidTime(String),

    #[error("state does not match the {variant} variant: {reason}")]
    StateMismatch {
        variant: &'static str,
        reason: &'static str,
    },

    #[error("zero pivot in tridiagonal elimination at row {row}")]
    ZeroPivot { row: usize },

    #[error("non-finite value in field `{field}` at cell {cell}")]
    NonFiniteState { field: &'static str, cell: usize },

    #[error("CFL number {cfl:.6} exceeds the explicit stability limit 0.5")]
    CflViolation { cfl: f64 },

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("jump [phi] must be non-zero")]
    ZeroJump,

    #[error("speed series is empty")]
    EmptySeries,

    #[error("d must be strictly positive for the exact front, got {0}")]
    NonPositiveD(f64),

    #[error("front not found: no crossing of level {level}")]
    FrontNotFound { level: f64 },

    #[error("front edge at x = {edge} is within {cells} cells of the domain boundary")]
    BoundaryContamination { edge: f64, cells: usize },

    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("analysis `{analysis}` is not available for this experiment: {reason}")]
    UnsupportedAnalysis {
        analysis: &'static str,
        reason: &'static str,
    },

    #[error("sweep: {0}")]
    InvalidSweep(String),

    #[error("all {0} sweep runs failed")]
    AllRunsFailed(usize),

    #[error("experiment `{name}`: {source}")]
    InExperiment {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Strips the step/experiment annotations and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } | Error::InExperiment { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures raised by the numerics rather than by input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::ZeroPivot { .. } | Error::NonFiniteState { .. } | Error::CflViolation { .. }
        )
    }

    /// Short stable identifier, used on the CLI's machine-readable error line
    /// and as the FFI error code mapping.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::InvalidDomain { .. } => "InvalidDomain",
            Error::NonIntegerCellCount { .. } => "NonIntegerCellCount",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::NegativeParameter(_) => "NegativeParameter",
            Error::UnusedParameter { .. } => "UnusedParameter",
            Error::MissingParameter { .. } => "MissingParameter",
            Error::JumpOutsideDomain { .. } => "JumpOutsideDomain",
            Error::StateArity { .. } => "StateArity",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::GridTooSmall { .. } => "GridTooSmall",
            Error::InvalidTime(_) => "InvalidTime",
            Error::StateMismatch { .. } => "StateMismatch",
            Error::ZeroPivot { .. } => "ZeroPivot",
            Error::NonFiniteState { .. } => "NonFiniteState",
            Error::CflViolation { .. } => "CflViolation",
            Error::ZeroJump => "ZeroJump",
            Error::EmptySeries => "EmptySeries",
            Error::NonPositiveD(_) => "NonPositiveD",
            Error::FrontNotFound { .. } => "FrontNotFound",
            Error::BoundaryContamination { .. } => "BoundaryContamination",
            Error::ParseError { .. } => "ParseError",
            Error::UnknownKey { .. } => "UnknownKey",
            Error::UnknownExperiment(_) => "UnknownExperiment",
            Error::UnsupportedAnalysis { .. } => "UnsupportedAnalysis",
            Error::InvalidSweep(_) => "InvalidSweep",
            Error::AllRunsFailed(_) => "AllRunsFailed",
            Error::Io { .. } => "IoError",
            Error::AtStep { .. } | Error::InExperiment { .. } => unreachable!("root() unwraps"),
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_experiment(self, name: &str) -> Error {
        Error::InExperiment {
            name: name.to_string(),
            source: Box::new(self),
        }
    }
}
