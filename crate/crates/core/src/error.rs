use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("tube violation: |t| = {t} is not below the tube half-width {beta}")]
    TubeViolation { t: f64, beta: f64 },

    #[error("network construction failed: {0}")]
    Construction(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("mesh too coarse: h = {h} exceeds {limit}, a quarter of the width {eps} to resolve")]
    Resolution { eps: f64, h: f64, limit: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("shift error: {0}")]
    Shift(String),

    #[error("rate fit failed: {0}")]
    Fit(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("error at eps = {eps}: {source}")]
    AtEps {
        eps: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_eps(eps: f64) -> impl FnOnce(Error) -> Error {
        move |e| Error::AtEps {
            eps,
            source: Box::new(e),
        }
    }
}
