use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// ε = mℏω̃β must stay below one.
    #[error("GUP bound violated: epsilon = {epsilon} >= 1")]
    GupViolation { epsilon: f64 },

    #[error("thermal wavelength {lambda_th} does not exceed the minimal length {dx_min}")]
    ThermalRegimeViolation { lambda_th: f64, dx_min: f64 },

    #[error("only the beta' = 0, gamma = 0 algebra is supported (got beta' = {beta_prime}, gamma = {gamma_rep})")]
    UnsupportedAlgebra { beta_prime: f64, gamma_rep: f64 },

    #[error("quantity is undefined for the undeformed theory (beta = 0)")]
    Undeformed,

    #[error("no convergence: {what} (estimate {estimate:e}, tolerance {tolerance:e})")]
    Convergence {
        what: String,
        estimate: f64,
        tolerance: f64,
    },

    #[error("divergent momentum moment: tail exponent lambda = {lambda} is not integrable")]
    DivergentMoment { lambda: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("non-real eigenvalue: imaginary part {imag:e}")]
    NonRealEigenvalue { imag: f64 },

    #[error("sum truncation: tail bound {tail_bound:e} exceeds tolerance after {terms} terms")]
    Truncation { tail_bound: f64, terms: usize },

    #[error("outside validity regime: {0}")]
    Regime(String),

    #[error("root not bracketed: found {found} sign change(s) on the scan")]
    RootNotBracketed {
        found: usize,
        scan: Vec<(f64, f64)>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Stable machine-readable code, used by the CLI error record.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DOMAIN_ERROR",
            Error::GupViolation { .. } => "GUP_VIOLATION",
            Error::ThermalRegimeViolation { .. } => "THERMAL_REGIME_VIOLATION",
            Error::UnsupportedAlgebra { .. } => "UNSUPPORTED_ALGEBRA",
            Error::Undeformed => "UNDEFORMED",
            Error::Convergence { .. } => "CONVERGENCE",
            Error::DivergentMoment { .. } => "DIVERGENT_MOMENT",
            Error::GridTooCoarse(_) => "GRID_TOO_COARSE",
            Error::NonRealEigenvalue { .. } => "NON_REAL_EIGENVALUE",
            Error::Truncation { .. } => "TRUNCATION",
            Error::Regime(_) => "REGIME",
            Error::RootNotBracketed { .. } => "ROOT_NOT_BRACKETED",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::NonRealEigenvalue { .. }
                | Error::Truncation { .. }
                | Error::GridTooCoarse(_)
                | Error::RootNotBracketed { .. }
        )
    }
}
