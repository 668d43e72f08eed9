//! Correlated bivariate Gaussian sampling.

use crate::error::StatsError;
use crate::stats::rng::RandomSource;

/// Moments of a jointly Gaussian (reward, side-information) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateGaussianSpec {
    pub mean_x: f64,
    pub mean_w: f64,
    pub std_x: f64,
    pub std_w: f64,
    pub rho: f64,
}

impl BivariateGaussianSpec {
    pub fn new(
        mean_x: f64,
        mean_w: f64,
        std_x: f64,
        std_w: f64,
        rho: f64,
    ) -> Result<Self, StatsError> {
        if !(std_x >= 0.0) {
            return Err(StatsError::domain("std_x", std_x, "[0, inf)"));
        }
        if !(std_w >= 0.0) {
            return Err(StatsError::domain("std_w", std_w, "[0, inf)"));
        }
        if !(-1.0..=1.0).contains(&rho) {
            return Err(StatsError::domain("rho", rho, "[-1, 1]"));
        }
        Ok(BivariateGaussianSpec {
            mean_x,
            mean_w,
            std_x,
            std_w,
            rho,
        })
    }
}

/// Draw one (x, w) pair via the Cholesky construction
/// x = mu + sigma_x z1, w = omega + sigma_w (rho z1 + sqrt(1 - rho^2) z2),
/// which has the spec's moments exactly.
pub fn sample_bivariate_gaussian(spec: &BivariateGaussianSpec, rng: &mut RandomSource) -> (f64, f64) {
    let z1 = rng.standard_normal();
    let z2 = rng.standard_normal();
    let x = spec.mean_x + spec.std_x * z1;
    let w = spec.mean_w + spec.std_w * (spec.rho * z1 + (1.0 - spec.rho * spec.rho).sqrt() * z2);
    (x, w)
}
