use thiserror::Error;

/// Errors raised by the numerical routines and the CLI driver.
///
/// Variants split into two families: input validation (bad shapes, out of
/// range parameters, non-symplectic input) and numerical failure (decompositions that break down,
/// flows that lose the graph condition). The CLI maps them onto exit codes
/// 2 and 3 respectively.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("matrix is not symplectic: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotSymplectic { residual: f64, tol: f64 },

    #[error("singular values cannot be paired into reciprocal pairs: {0}")]
    Pairing(String),

    #[error("LᵀL is numerically singular: smallest eigenvalue {smallest:.3e} vs largest {largest:.3e}")]
    SingularGram { smallest: f64, largest: f64 },

    #[error("failed to split singular subspaces: cluster around {value} has odd or mismatched dimension {dim}")]
    Cluster { value: f64, dim: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("flow failure at t = {t}: {reason}")]
    Flow { t: f64, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Invalid(_) | Error::NotSymplectic { .. } | Error::Io { .. } | Error::Json { .. })
    }

    /// Process exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            2
        } else {
            3
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
