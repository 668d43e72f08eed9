//! Per-arm observation history and the scalar control-variate estimators.

use crate::error::EstimatorError;
use crate::stats::percentile_v;

/// One round's (reward, side-information) draw from an arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationPair {
    pub reward: f64,
    pub side_info: f64,
}

/// Which variance formula backs the confidence radius.
///
/// `RegressionPrediction` is the standard regression-prediction variance; the
/// `InvertedCorrection` form is kept only so the two can be compared empirically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceFormula {
    #[default]
    RegressionPrediction,
    InvertedCorrection,
}

/// How the coefficient estimate centers the side-information.
///
/// `KnownMean` centers W at the known mean in both numerator and denominator;
/// `SampleMean` is the textbook form centered at the sample mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaCentering {
    #[default]
    KnownMean,
    SampleMean,
}

/// Per-arm history of observation pairs plus the known side-information mean.
///
/// Running totals are maintained on push so every scalar estimator is O(1)
/// per update.
#[derive(Debug, Clone)]
pub struct SampleBuffer {
    xs: Vec<f64>,
    ws: Vec<f64>,
    omega: f64,
    sum_x: f64,
    sum_w: f64,
    sum_xx: f64,
    sum_ww: f64,
    sum_xw: f64,
}

impl SampleBuffer {
    pub fn new(omega: f64) -> Self {
        SampleBuffer {
            xs: Vec::new(),
            ws: Vec::new(),
            omega,
            sum_x: 0.0,
            sum_w: 0.0,
            sum_xx: 0.0,
            sum_ww: 0.0,
            sum_xw: 0.0,
        }
    }

    pub fn from_pairs(omega: f64, xs: &[f64], ws: &[f64]) -> Self {
        assert_eq!(xs.len(), ws.len(), "xs and ws must have equal length");
        let mut buf = SampleBuffer::new(omega);
        for (&x, &w) in xs.iter().zip(ws) {
            buf.push(x, w);
        }
        buf
    }

    pub fn push(&mut self, x: f64, w: f64) {
        self.xs.push(x);
        self.ws.push(w);
        self.sum_x += x;
        self.sum_w += w;
        self.sum_xx += x * x;
        self.sum_ww += w * w;
        self.sum_xw += x * w;
    }

    pub fn push_pair(&mut self, obs: ObservationPair) {
        self.push(obs.reward, obs.side_info);
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ws(&self) -> &[f64] {
        &self.ws
    }

    /// Sample mean of the rewards.
    pub fn mean_x(&self) -> f64 {
        self.sum_x / self.len() as f64
    }

    /// Sample mean of the side-information.
    pub fn mean_w(&self) -> f64 {
        self.sum_w / self.len() as f64
    }

    pub(crate) fn sum_x(&self) -> f64 {
        self.sum_x
    }

    pub(crate) fn sum_w(&self) -> f64 {
        self.sum_w
    }

    pub(crate) fn sum_ww(&self) -> f64 {
        self.sum_ww
    }

    pub(crate) fn sum_xw(&self) -> f64 {
        self.sum_xw
    }

    /// Sum of squared reward deviations about the sample mean.
    pub fn ssd_x(&self) -> f64 {
        (self.sum_xx - self.len() as f64 * self.mean_x() * self.mean_x()).max(0.0)
    }

    /// Sum of squared SI deviations about the known mean.
    pub fn ssd_w_about_omega(&self) -> f64 {
        let s = self.len() as f64;
        (self.sum_ww - 2.0 * self.omega * self.sum_w + s * self.omega * self.omega).max(0.0)
    }

    /// Sum of squared SI deviations about the sample mean.
    pub fn ssd_w_about_mean(&self) -> f64 {
        (self.sum_ww - self.len() as f64 * self.mean_w() * self.mean_w()).max(0.0)
    }

    /// Degenerate side-information threshold.
    pub fn eps_w(&self) -> f64 {
        1e-12 * 1.0f64.max(self.len() as f64 * self.omega * self.omega)
    }

    /// Plain sample-mean estimate and the classical variance of the mean
    /// (sample variance with s - 1 divisor, over s).
    pub fn plain_estimate(&self) -> Result<(f64, f64), EstimatorError> {
        let s = self.len();
        if s < 2 {
            return Err(EstimatorError::InsufficientSamples { have: s, need: 2 });
        }
        let var = self.ssd_x() / (s as f64 - 1.0);
        Ok((self.mean_x(), var / s as f64))
    }
}

/// Output of the estimator stack for one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvEstimate {
    pub mean: f64,
    pub variance: f64,
    pub beta: f64,
    pub n: usize,
}

/// Variance-optimal control-variate coefficient Cov(X, W) / Var(W).
pub fn optimal_beta(cov_xw: f64, var_w: f64) -> Result<f64, EstimatorError> {
    if !(var_w > 0.0) {
        return Err(EstimatorError::DegenerateSideInfo {
            ssd: var_w,
            threshold: 0.0,
        });
    }
    Ok(cov_xw / var_w)
}

/// The transformed sample x + beta (omega - w).
pub fn transform_sample(x: f64, w: f64, omega: f64, beta: f64) -> f64 {
    x + beta * (omega - w)
}

/// Estimated coefficient: sum (X_r - mean_x)(W_r - omega) / sum (W_r - omega)^2.
///
/// Note the numerator centers X at the sample mean but W at the known mean,
/// and the denominator also centers W at the known mean.
pub fn beta_hat(buf: &SampleBuffer) -> Result<f64, EstimatorError> {
    beta_hat_with(buf, BetaCentering::KnownMean)
}

pub fn beta_hat_with(buf: &SampleBuffer, centering: BetaCentering) -> Result<f64, EstimatorError> {
    let s = buf.len();
    if s < 2 {
        return Err(EstimatorError::InsufficientSamples { have: s, need: 2 });
    }
    let (center, den) = match centering {
        BetaCentering::KnownMean => (buf.omega(), buf.ssd_w_about_omega()),
        BetaCentering::SampleMean => (buf.mean_w(), buf.ssd_w_about_mean()),
    };
    if den <= buf.eps_w() {
        return Err(EstimatorError::DegenerateSideInfo {
            ssd: den,
            threshold: buf.eps_w(),
        });
    }
    let s_f = s as f64;
    let num = buf.sum_xw() - buf.mean_x() * buf.sum_w() - center * buf.sum_x()
        + s_f * buf.mean_x() * center;
    Ok(num / den)
}

/// Control-variate point estimate mean_x + beta_hat (omega - mean_w).
pub fn cv_point_estimate(buf: &SampleBuffer) -> Result<f64, EstimatorError> {
    cv_point_estimate_with(buf, BetaCentering::default())
}

/// Point estimate with an explicit coefficient centering. With sample-mean
/// centering this is the fitted regression line evaluated at omega.
pub fn cv_point_estimate_with(
    buf: &SampleBuffer,
    centering: BetaCentering,
) -> Result<f64, EstimatorError> {
    let beta = beta_hat_with(buf, centering)?;
    Ok(buf.mean_x() + beta * (buf.omega() - buf.mean_w()))
}

/// Variance estimate for the control-variate point estimator.
pub fn cv_variance_estimate(buf: &SampleBuffer) -> Result<f64, EstimatorError> {
    cv_variance_estimate_with(buf, VarianceFormula::RegressionPrediction, BetaCentering::default())
}

pub fn cv_variance_estimate_with(
    buf: &SampleBuffer,
    formula: VarianceFormula,
    centering: BetaCentering,
) -> Result<f64, EstimatorError> {
    let s = buf.len();
    if s < 4 {
        return Err(EstimatorError::InsufficientSamples { have: s, need: 4 });
    }
    let beta = beta_hat_with(buf, centering)?;
    let ssd_w_mean = buf.ssd_w_about_mean();
    if ssd_w_mean <= buf.eps_w() {
        return Err(EstimatorError::DegenerateSideInfo {
            ssd: ssd_w_mean,
            threshold: buf.eps_w(),
        });
    }
    let s_f = s as f64;
    // Residual sum of squares of the transformed samples about their mean:
    // sum ((x_r - mean_x) - beta (w_r - mean_w))^2, from the cached totals.
    let sxx = buf.ssd_x();
    let sww = ssd_w_mean;
    let sxw = buf.sum_xw() - s_f * buf.mean_x() * buf.mean_w();
    let rss = (sxx - 2.0 * beta * sxw + beta * beta * sww).max(0.0);
    let s2 = rss / (s_f - 2.0);
    let dev = buf.mean_w() - buf.omega();
    match formula {
        VarianceFormula::RegressionPrediction => Ok(s2 * (1.0 / s_f + dev * dev / ssd_w_mean)),
        VarianceFormula::InvertedCorrection => {
            // S^2 (1/s - (sum (W - omega))^2 / (s^2 sum (W - mean_w)^2))^{-1},
            // using sum (W - omega) = s (mean_w - omega).
            Ok(s2 / (1.0 / s_f - dev * dev / ssd_w_mean))
        }
    }
}

/// Confidence radius V_{t,s}^{(alpha)} sqrt(variance) with s - 2 degrees of
/// freedom.
pub fn confidence_radius(buf: &SampleBuffer, t: u64, alpha: f64) -> Result<f64, EstimatorError> {
    let nu = cv_variance_estimate(buf)?;
    let dof = buf.len() as u64 - 2;
    let v = percentile_v(t, alpha, dof).expect("valid percentile arguments");
    Ok(v * nu.sqrt())
}

/// Full scalar estimate: point, variance, coefficient, sample count.
pub fn cv_estimate(buf: &SampleBuffer) -> Result<CvEstimate, EstimatorError> {
    let beta = beta_hat(buf)?;
    let mean = buf.mean_x() + beta * (buf.omega() - buf.mean_w());
    let variance = cv_variance_estimate(buf)?;
    Ok(CvEstimate {
        mean,
        variance,
        beta,
        n: buf.len(),
    })
}
