use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("quadrature did not reach tolerance (error estimate {estimate:e}, allowed {allowed:e})")]
    QuadratureFailure { estimate: f64, allowed: f64 },
    #[error("point {0} lies on the support of the measure")]
    OnSupport(f64),
    #[error("boundary value has imaginary residual {0:e}")]
    ImaginaryResidual(f64),
    #[error("could not bracket the inverse of f at u = {0}")]
    BracketFailure(f64),
    #[error("root finding failed: {0}")]
    RootFailure(String),
    #[error("u = {0} is outside the domain (phi(u) = 0)")]
    OutsideDomain(f64),
    #[error("point {re} + {im}i is outside the closure of Lambda")]
    OutsideLambda { re: f64, im: f64 },
    #[error("point {re} + {im}i is outside the closure of Omega")]
    OutsideOmega { re: f64, im: f64 },
    #[error("|v0| exceeds v_t(u0) at {re} + {im}i")]
    OutsideLambdaClosure { re: f64, im: f64 },
    #[error("sign-scan step too coarse near u = {0}")]
    ResolutionTooCoarse(f64),
    #[error("t = {t} exceeds the path lifetime {lifetime}")]
    BeyondLifetime { t: f64, lifetime: f64 },
    #[error("height b = {b} exceeds the peak height {peak}")]
    NegativeSquare { b: f64, peak: f64 },
    #[error("pushed grid is not strictly increasing near index {0}")]
    NonMonotone(usize),
    #[error("Brown measure has no planar density here: {0}")]
    Degenerate(String),
    #[error("sampling not supported for {0} measures")]
    UnsupportedSampling(&'static str),
    #[error("eigensolver failed (residual {residual:e})")]
    ConvergenceFailure { residual: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteInput)
    }
}
