use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The response variable is (numerically) degenerate.
    #[error("degenerate response: {0}")]
    DegenerateResponse(String),

    /// `q - sum xi(Y_i, Y_<i)` vanished: the response is perfectly self-determined.
    #[error("perfect internal dependence: denominator {0:e} below tolerance")]
    PerfectInternalDependence(f64),

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    #[error("conditioning point outside the radial support (q(x) = {0})")]
    EmptyConditioning(f64),

    #[error("invalid radial law: {0}")]
    InvalidRadial(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
