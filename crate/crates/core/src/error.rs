use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A point or parameter lies outside the domain where the formulas hold.
    #[error("domain error: {0}")]
    Domain(String),

    /// A formula is singular at the requested parameters.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("matrix exponential overflow: norm {norm} exceeds cap {cap}")]
    Overflow { norm: f64, cap: f64 },

    #[error("quadrature did not converge after {panels} panels (last {last:e}, previous {previous:e})")]
    NonConvergence { panels: usize, last: f64, previous: f64 },

    #[error("no sign convention reproduces the Dirac equation (best residual {best:e})")]
    ConventionUnresolved { best: f64 },

    #[error("fit quality: {0}")]
    FitQuality(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 1,
            Error::Domain(_) | Error::Degenerate(_) | Error::Overflow { .. } => 2,
            Error::NonConvergence { .. } | Error::ConventionUnresolved { .. } | Error::FitQuality(_) => 3,
        }
    }
}
