//! Numerical primitives: special functions, Student-t quantiles, and seeded
//! correlated-Gaussian sampling.

pub mod bivariate;
pub mod rng;
pub mod special;
pub mod student_t;

pub use bivariate::{sample_bivariate_gaussian, BivariateGaussianSpec};
pub use rng::RandomSource;
pub use special::{gamma_p, ln_gamma, normal_cdf, normal_quantile, regularized_incomplete_beta};
pub use student_t::{percentile_v, t_quantile, StudentT};
