//! Student-t distribution: cdf, pdf, quantile, and the confidence-radius
//! percentile values used by the UCB indices.

use crate::error::StatsError;
use crate::stats::special::{inc_beta, ln_gamma, normal_quantile};

/// Student-t distribution with integer degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudentT {
    dof: u64,
}

impl StudentT {
    pub fn new(dof: u64) -> Result<Self, StatsError> {
        if dof < 1 {
            return Err(StatsError::domain("dof", dof as f64, "[1, inf)"));
        }
        Ok(StudentT { dof })
    }

    pub fn dof(&self) -> u64 {
        self.dof
    }

    /// Cumulative distribution function. Strictly increasing; cdf(0) = 0.5.
    pub fn cdf(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.5;
        }
        let sf = self.survival_abs(x.abs());
        if x > 0.0 {
            1.0 - sf
        } else {
            sf
        }
    }

    /// Upper tail P(T > x) for x >= 0, computed without cancellation so it
    /// stays accurate deep into the tail.
    fn survival_abs(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        let nu = self.dof as f64;
        // y = nu/(nu + x^2), complement computed directly.
        let y = nu / (nu + x * x);
        let yc = x * x / (nu + x * x);
        0.5 * inc_beta(0.5 * nu, 0.5, y, yc)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let nu = self.dof as f64;
        let ln_norm = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * std::f64::consts::PI).ln();
        (ln_norm - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()).exp()
    }

    /// Inverse cdf. Solves cdf(x) = p to within 1e-10 absolute (1e-10 relative
    /// in the tail) in probability space via bracketed bisection refined by
    /// Newton steps.
    pub fn quantile(&self, p: f64) -> Result<f64, StatsError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(StatsError::domain("p", p, "(0, 1)"));
        }
        if p == 0.5 {
            return Ok(0.0);
        }
        // Work on the upper tail: solve survival(x) = q with x >= 0.
        // For p in [0.5, 1), 1 - p is exact in f64 (Sterbenz), so no precision
        // is lost by folding.
        let (q, sign) = if p >= 0.5 { (1.0 - p, 1.0) } else { (p, -1.0) };
        Ok(sign * self.upper_quantile(q))
    }

    /// Solve survival(x) = q for x >= 0, 0 < q <= 0.5.
    fn upper_quantile(&self, q: f64) -> f64 {
        let nu = self.dof as f64;
        // Initial guess: normal limit, corrected by the Cornish-Fisher-style
        // expansion in 1/nu; exact tail formula for dof = 1 and 2.
        let mut x = match self.dof {
            1 => (std::f64::consts::PI * q).tan().recip().max(0.0),
            2 => {
                let a = 4.0 * q * (1.0 - q);
                ((2.0 / a - 2.0).max(0.0)).sqrt()
            }
            _ => {
                let z = normal_quantile(1.0 - q).unwrap_or(0.0);
                let z3 = z * z * z;
                let z5 = z3 * z * z;
                z + (z3 + z) / (4.0 * nu) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu)
            }
        }
        .max(0.0);
        if !x.is_finite() {
            x = 1.0;
        }

        // Bracket the root: survival is decreasing in x.
        let (mut lo, mut hi);
        if self.survival_abs(x) > q {
            lo = x;
            hi = if x > 0.0 { 2.0 * x } else { 1.0 };
            while self.survival_abs(hi) > q {
                lo = hi;
                hi *= 2.0;
                if hi > 1e300 {
                    return hi;
                }
            }
        } else {
            hi = x;
            lo = 0.0;
        }

        let tol = 1e-14 + 1e-10 * q;
        for _ in 0..200 {
            let s = self.survival_abs(x);
            let err = s - q;
            if err.abs() <= tol {
                break;
            }
            if err > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            // Newton step; fall back to bisection when it leaves the bracket.
            let d = self.pdf(x);
            let mut next = if d > 0.0 { x + err / d } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if next == x {
                break;
            }
            x = next;
        }
        x
    }
}

/// Inverse Student-t cdf: returns x with cdf_{dof}(x) = p.
pub fn t_quantile(p: f64, dof: u64) -> Result<f64, StatsError> {
    StudentT::new(dof)?.quantile(p)
}

/// The percentile value V_{t,s}^{(alpha)}: the 100(1 - 1/t^alpha)-th
/// percentile of the Student-t distribution with the given degrees of
/// freedom.
pub fn percentile_v(t: u64, alpha: f64, dof: u64) -> Result<f64, StatsError> {
    if t < 2 {
        return Err(StatsError::domain("t", t as f64, "[2, inf)"));
    }
    if !(alpha > 1.0) {
        return Err(StatsError::domain("alpha", alpha, "(1, inf)"));
    }
    let dist = StudentT::new(dof)?;
    // Upper-tail mass 1/t^alpha, solved directly in the tail to avoid forming
    // 1 - 1/t^alpha at all.
    let q = (t as f64).powf(-alpha);
    Ok(dist.upper_quantile(q))
}
