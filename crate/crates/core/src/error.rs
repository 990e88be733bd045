use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} has no pointwise response on the imaginary axis; use it inside a layer stack")]
    NoPointwiseResponse(&'static str),

    #[error("source and field points coincide")]
    CoincidentPoints,

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("quadrature did not converge ({context}): value {value:e}, error estimate {error:e}")]
    Nonconvergence {
        context: String,
        value: f64,
        error: f64,
    },

    #[error("inner integral did not converge at outer abscissa {abscissa:e}: value {value:e}, error estimate {error:e}")]
    InnerNonconvergence { abscissa: f64, value: f64, error: f64 },

    #[error("principal-value pole: the two frequency arguments coincide")]
    PrincipalValuePole,

    #[error("case does not apply: {0}")]
    Mismatch(String),
}
