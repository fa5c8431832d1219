use thiserror::Error;

/// Errors raised by the computational engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is zero up to its truncation order")]
    ZeroSeries,
    #[error("log requires constant term 1")]
    LogPrecondition,
    #[error("exp requires zero constant term")]
    ExpPrecondition,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("singular theta value in a denominator: {0}")]
    SingularTheta(String),
    #[error("requested order {requested} exceeds computed order {available}")]
    OrderExceeded { requested: i64, available: i64 },
    #[error("result is not rational at exponent {0}")]
    NotRational(i64),
    #[error("numeric evaluation is not finite: {0}")]
    NonFinite(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ConductorMismatch(..) => "conductor_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::ZeroSeries => "zero_series",
            Error::LogPrecondition => "log_precondition",
            Error::ExpPrecondition => "exp_precondition",
            Error::Invalid(_) => "invalid_input",
            Error::SingularTheta(_) => "singular_theta",
            Error::OrderExceeded { .. } => "order_exceeded",
            Error::NotRational(_) => "not_rational",
            Error::NonFinite(_) => "non_finite",
            Error::NonConvergence(_) => "non_convergence",
        }
    }
}
