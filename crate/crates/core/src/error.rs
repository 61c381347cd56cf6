use thiserror::Error;

/// Errors raised by the line-space kernels and the batch front-end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite sample encountered at {at}")]
    NonFiniteSample { at: String },
    #[error("integration blew up at s = {s}")]
    Blowup { s: f64 },
    #[error("curve undersampled: angle gap {gap} exceeds half the period {period}")]
    UndersampledCurve { gap: f64, period: f64 },
    #[error("chart singularity: {0}")]
    ChartSingularity(String),
    #[error("geodesic parameter singularity: |C2*s| = {0} reaches pi/2")]
    ParameterSingularity(f64),
    #[error("lines are parallel; no helicoid joins them")]
    NoHelicoid,
    #[error("congruence is degenerate (caustic) at the evaluation point")]
    Caustic,
    #[error("signature ambiguous: det = {det}, lambda^2 - |sigma|^2 = {scalars}")]
    AmbiguousSignature { det: f64, scalars: f64 },
    #[error("pulled-back 1-form is not closed: max |f*Omega| = {0}")]
    NotClosed(f64),
    #[error("complex points are not isolated")]
    NonIsolated,
    #[error("complex points closer than the grid can resolve")]
    ResolutionLimit,
    #[error("curve passes through a complex point at t = {0}")]
    CurveHitsComplexPoint(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code for the batch front-end: 1 config, 2 domain, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 1,
            Error::NonFiniteSample { .. }
            | Error::Blowup { .. }
            | Error::UndersampledCurve { .. }
            | Error::ResolutionLimit
            | Error::AmbiguousSignature { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
