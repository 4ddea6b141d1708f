use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("series shape mismatch: ({m1} vars, degree {d1}) vs ({m2} vars, degree {d2})")]
    SeriesMismatch {
        m1: usize,
        d1: u32,
        m2: usize,
        d2: u32,
    },
    #[error("phase function is not of the form |x|^2 + O(|x|^4): {0}")]
    InvalidPhase(String),
    #[error("degree budget too small: order {order} needs degree >= {needed}, inputs carry {available}")]
    DegreeBudget {
        order: u32,
        needed: u32,
        available: u32,
    },
    #[error("quadrature did not converge within {panels} panels (error estimate {estimate:e})")]
    QuadratureNotConverged { estimate: f64, panels: usize },
    #[error("zeta function is not holomorphic at s=0: t^0 log t coefficient {coefficient:e}")]
    NotHolomorphic { coefficient: f64 },
    #[error("missing character data: {0}")]
    MissingCharacter(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid spectral data: {0}")]
    InvalidSpectralData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
