use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gamma function has a pole at {0}")]
    Pole(f64),
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("precision loss: estimated relative error {estimate:e} exceeds {limit:e}")]
    PrecisionLoss { estimate: f64, limit: f64 },
    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("Laplace inversion failed: {0}")]
    InversionFailure(String),
    #[error("quadrature failed: estimate {estimate:e} with error {error:e} after {subdivisions} subdivisions")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    reason: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
