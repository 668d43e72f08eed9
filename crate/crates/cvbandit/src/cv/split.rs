//! Splitting (leave-one-out) estimator for non-Gaussian pairs.
//!
//! Each sample j is transformed with a coefficient estimated from the buffer
//! with pair j removed, breaking the dependence between the coefficient and
//! the sample it corrects.

use crate::cv::buffer::SampleBuffer;
use crate::error::EstimatorError;

/// The s leave-one-out transformed samples, in index order.
///
/// Leave-one-out coefficients are reconstructed from the cached totals, so the
/// whole pass is O(s).
pub fn split_transformed_samples(buf: &SampleBuffer) -> Result<Vec<f64>, EstimatorError> {
    let s = buf.len();
    if s < 3 {
        return Err(EstimatorError::InsufficientSamples { have: s, need: 3 });
    }
    let omega = buf.omega();
    let sum_x = buf.sum_x();
    let sum_w = buf.sum_w();
    let sum_ww = buf.sum_ww();
    let sum_xw = buf.sum_xw();
    // Threshold for the (s-1)-sample leave-one-out groups.
    let eps = 1e-12 * 1.0f64.max((s as f64 - 1.0) * omega * omega);

    let mut out = Vec::with_capacity(s);
    for j in 0..s {
        let xj = buf.xs()[j];
        let wj = buf.ws()[j];
        let s1 = s as f64 - 1.0;
        let sx = sum_x - xj;
        let sw = sum_w - wj;
        let sww = sum_ww - wj * wj;
        let sxw = sum_xw - xj * wj;
        let mean_x = sx / s1;
        let den = (sww - 2.0 * omega * sw + s1 * omega * omega).max(0.0);
        if den <= eps {
            return Err(EstimatorError::DegenerateSideInfo {
                ssd: den,
                threshold: eps,
            });
        }
        let num = sxw - mean_x * sw - omega * sx + s1 * mean_x * omega;
        let beta = num / den;
        out.push(xj + beta * (omega - wj));
    }
    Ok(out)
}

/// Splitting point estimate (mean of the leave-one-out samples) and the
/// sample-mean variance sum (x - mean)^2 / (s (s - 1)).
pub fn split_estimate(buf: &SampleBuffer) -> Result<(f64, f64), EstimatorError> {
    let samples = split_transformed_samples(buf)?;
    let s = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / s;
    let ssd: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((mean, ssd / (s * (s - 1.0))))
}
