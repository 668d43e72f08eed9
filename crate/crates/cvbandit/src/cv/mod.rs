//! Control-variate estimator stack: coefficient estimates, transformed
//! samples, point and variance estimators, confidence radii, the splitting
//! estimator, and the multi-side-information generalization.

pub mod buffer;
pub mod multi;
pub mod split;

pub use buffer::{
    beta_hat, beta_hat_with, confidence_radius, cv_estimate, cv_point_estimate,
    cv_point_estimate_with, cv_variance_estimate, cv_variance_estimate_with, optimal_beta,
    transform_sample,
    BetaCentering, CvEstimate, ObservationPair, SampleBuffer, VarianceFormula,
};
pub use multi::{multi_beta_hat, multi_cv_point_estimate, MultiSampleBuffer};
pub use split::{split_estimate, split_transformed_samples};
