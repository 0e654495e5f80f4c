use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spacetime dimension D = {0} (need D >= 3)")]
    InvalidDimension(i32),

    #[error("non-physical metric: (1 + A)^(4/(D-2)) is complex for A = {amplitude}, D = {dimension}")]
    NonPhysicalMetric { amplitude: f64, dimension: i32 },

    #[error("resolution error: dt = {dt} exceeds tau/8 = {limit}")]
    ResolutionError { dt: f64, limit: f64 },

    #[error("indefinite covariance: spectral component {value:e} at index {index}")]
    IndefiniteCovariance { index: usize, value: f64 },

    #[error("time {t} outside realization grid [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("even moment order {0} rejected (odd orders only)")]
    EvenOrderRejected(u32),

    #[error("insufficient samples: {0} < 100")]
    InsufficientSamples(usize),

    #[error("degenerate fit: {0}")]
    FitDegenerate(String),

    #[error("quadrature failed to reach tolerance: estimate {estimate:e}, error {error:e}")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("step too large: halving dt changed the result by {0:e}")]
    StepTooLarge(f64),

    #[error("cut-off below the Planck scale: lambda = {0}")]
    SubPlanckCutoff(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid correlation table: {0}")]
    InvalidTable(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
