//! Scalar distribution and marginal specifications for arm models.

use serde::{Deserialize, Serialize};

use crate::stats::special::{normal_cdf, normal_quantile, regularized_incomplete_beta};
use crate::stats::RandomSource;

const DB_LN: f64 = core::f64::consts::LN_10 / 10.0;

/// Nonnegative power-like quantity: constant or lognormal, the latter either
/// in natural-log parameters or as a normal distribution on the dB scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case")]
pub enum DistSpec {
    Constant { value: f64 },
    Lognormal { mu: f64, sigma: f64 },
    LognormalDb { mean_db: f64, std_db: f64 },
}

impl DistSpec {
    pub fn sample(&self, rng: &mut RandomSource) -> f64 {
        match *self {
            DistSpec::Constant { value } => value,
            DistSpec::Lognormal { mu, sigma } => (mu + sigma * rng.standard_normal()).exp(),
            DistSpec::LognormalDb { mean_db, std_db } => {
                ((mean_db + std_db * rng.standard_normal()) * DB_LN).exp()
            }
        }
    }

    /// Analytic mean.
    pub fn mean(&self) -> f64 {
        match *self {
            DistSpec::Constant { value } => value,
            DistSpec::Lognormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            DistSpec::LognormalDb { mean_db, std_db } => {
                let mu = mean_db * DB_LN;
                let sigma = std_db * DB_LN;
                (mu + 0.5 * sigma * sigma).exp()
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, DistSpec::Constant { .. })
    }
}

/// Marginal distribution for the copula-based general arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "marginal", rename_all = "snake_case")]
pub enum MarginalSpec {
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    ShiftedBeta {
        alpha: f64,
        beta: f64,
        loc: f64,
        scale: f64,
    },
    Gaussian {
        mean: f64,
        std: f64,
    },
}

impl MarginalSpec {
    pub fn mean(&self) -> f64 {
        match *self {
            MarginalSpec::Lognormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            MarginalSpec::ShiftedBeta {
                alpha,
                beta,
                loc,
                scale,
            } => loc + scale * alpha / (alpha + beta),
            MarginalSpec::Gaussian { mean, .. } => mean,
        }
    }

    /// Map a standard normal draw through the marginal (the Gaussian-copula
    /// transform for one coordinate).
    pub fn from_normal(&self, z: f64) -> f64 {
        match *self {
            MarginalSpec::Lognormal { mu, sigma } => (mu + sigma * z).exp(),
            MarginalSpec::Gaussian { mean, std } => mean + std * z,
            MarginalSpec::ShiftedBeta { .. } => self.quantile(normal_cdf(z)),
        }
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(1e-15, 1.0 - 1e-15);
        match *self {
            MarginalSpec::Lognormal { mu, sigma } => {
                (mu + sigma * normal_quantile(u).expect("u in (0,1)")).exp()
            }
            MarginalSpec::Gaussian { mean, std } => {
                mean + std * normal_quantile(u).expect("u in (0,1)")
            }
            MarginalSpec::ShiftedBeta {
                alpha,
                beta,
                loc,
                scale,
            } => loc + scale * beta_inv(alpha, beta, u),
        }
    }
}

/// Inverse regularized incomplete beta by bisection. Accuracy ~1e-12, plenty
/// for Monte-Carlo marginals.
fn beta_inv(a: f64, b: f64, u: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if regularized_incomplete_beta(a, b, mid).expect("valid beta args") < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lognormal_db_mean_matches_monte_carlo() {
        let d = DistSpec::LognormalDb {
            mean_db: 5.0,
            std_db: 2.0,
        };
        let mut rng = RandomSource::new(5);
        let n = 200_000;
        let mc: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mc - d.mean()).abs() / d.mean() < 0.01, "mc={mc} analytic={}", d.mean());
    }

    #[test]
    fn constant_is_constant() {
        let d = DistSpec::Constant { value: 3.5 };
        let mut rng = RandomSource::new(1);
        assert_eq!(d.sample(&mut rng), 3.5);
        assert_eq!(d.mean(), 3.5);
    }

    #[test]
    fn beta_quantile_round_trip() {
        for &(a, b) in &[(2.0, 5.0), (0.7, 0.7), (4.0, 1.5)] {
            for &u in &[0.05, 0.3, 0.5, 0.9] {
                let x = beta_inv(a, b, u);
                assert_relative_eq!(
                    regularized_incomplete_beta(a, b, x).unwrap(),
                    u,
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn shifted_beta_mean() {
        let m = MarginalSpec::ShiftedBeta {
            alpha: 2.0,
            beta: 6.0,
            loc: 1.0,
            scale: 4.0,
        };
        assert_relative_eq!(m.mean(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn marginal_from_normal_median() {
        let m = MarginalSpec::Lognormal { mu: 0.3, sigma: 0.9 };
        assert_relative_eq!(m.from_normal(0.0), 0.3f64.exp(), max_relative = 1e-12);
    }
}
