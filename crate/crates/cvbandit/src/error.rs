use thiserror::Error;

/// Errors produced by the estimator stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    /// The side-information carries no usable variation around its mean.
    #[error("degenerate side-information: sum of squared deviations {ssd:e} below threshold {threshold:e}")]
    DegenerateSideInfo { ssd: f64, threshold: f64 },
    /// Too few observation pairs for the requested estimator.
    #[error("insufficient samples: have {have}, need at least {need}")]
    InsufficientSamples { have: usize, need: usize },
    /// The multi-side-information system matrix is numerically singular.
    #[error("singular side-information system (pivot ratio {pivot_ratio:e})")]
    SingularSideInfo { pivot_ratio: f64 },
}

/// Domain errors from the numerical primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("parameter `{name}` = {value} outside valid domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
}

impl StatsError {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        StatsError::Domain {
            name,
            value,
            domain,
        }
    }
}
