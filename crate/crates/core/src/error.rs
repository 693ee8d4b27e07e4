use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A numerical routine could not reach its tolerance. `estimate` is the
    /// best value found and `residual` the achieved error estimate.
    #[error("tolerance not reached: {context} (estimate {estimate:e}, residual {residual:e})")]
    Tolerance {
        context: String,
        estimate: f64,
        residual: f64,
    },

    #[error("integral appears divergent: {0}")]
    Divergence(String),

    #[error("unsupported bath mode: {0}")]
    UnsupportedMode(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("no sign change of Γ(t)-1 on [{t_lo:e}, {t_hi:e}] (Γ = {gamma_lo:e}, {gamma_hi:e})")]
    Bracket {
        t_lo: f64,
        t_hi: f64,
        gamma_lo: f64,
        gamma_hi: f64,
    },

    #[error("covariance is not positive semidefinite: eigenvalue {eigenvalue:e} vs largest {max_eigenvalue:e}")]
    NotPsd {
        eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("Monte-Carlo average of cos Φ is {mean_cos:e}; decoherence saturated, use a shorter t_f")]
    Saturated { mean_cos: f64 },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for failures of a numerical method rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Tolerance { .. } | Error::Divergence(_) | Error::Bracket { .. }
        )
    }
}
