use thiserror::Error;

use crate::spectral::FactorPoint;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum LabError {
    /// An argument lies outside the operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} needs {requested} nodes, cap is {cap}")]
    Capacity {
        what: String,
        requested: usize,
        cap: usize,
    },

    /// The Gram matrix (or its factor) is numerically singular.
    #[error("conditioning failure at degree {n}: {detail}; reduce the degree")]
    Conditioning { n: usize, detail: String },

    #[error("{what} did not converge after {iterations} iterations")]
    Convergence { what: String, iterations: usize },

    /// A sweep stopped early; `completed` holds every point finished before the failure.
    #[error("sweep aborted after {} completed points: {source}", completed.len())]
    SweepAborted {
        completed: Vec<FactorPoint>,
        #[source]
        source: Box<LabError>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        LabError::Domain(msg.into())
    }

    /// True for failures that signal numerical capacity limits rather than bad input.
    pub fn is_numerical_limit(&self) -> bool {
        match self {
            LabError::Capacity { .. }
            | LabError::Conditioning { .. }
            | LabError::Convergence { .. } => true,
            LabError::SweepAborted { source, .. } => source.is_numerical_limit(),
            _ => false,
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
