//! Estimators for arms carrying several side-informations per draw.

use crate::error::EstimatorError;

/// History of rewards with a q-column side-information matrix and the known
/// per-column means.
#[derive(Debug, Clone)]
pub struct MultiSampleBuffer {
    xs: Vec<f64>,
    ws: Vec<Vec<f64>>,
    omegas: Vec<f64>,
}

impl MultiSampleBuffer {
    pub fn new(omegas: Vec<f64>) -> Self {
        MultiSampleBuffer {
            xs: Vec::new(),
            ws: Vec::new(),
            omegas,
        }
    }

    pub fn push(&mut self, x: f64, w_row: Vec<f64>) {
        assert_eq!(
            w_row.len(),
            self.omegas.len(),
            "side-information row width must match omega vector"
        );
        self.xs.push(x);
        self.ws.push(w_row);
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn q(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn mean_x(&self) -> f64 {
        self.xs.iter().sum::<f64>() / self.len() as f64
    }

    pub fn mean_w(&self) -> Vec<f64> {
        let s = self.len() as f64;
        let mut m = vec![0.0; self.q()];
        for row in &self.ws {
            for (mj, &w) in m.iter_mut().zip(row) {
                *mj += w;
            }
        }
        m.iter_mut().for_each(|v| *v /= s);
        m
    }
}

const EPS_COND: f64 = 1e-10;

/// Estimated coefficient vector solving
/// (W'W - s wbar wbar') beta = W'X - s wbar mean_x
/// by Gaussian elimination with partial pivoting. A pivot smaller than
/// EPS_COND times the largest matrix entry is treated as singular.
pub fn multi_beta_hat(buf: &MultiSampleBuffer) -> Result<Vec<f64>, EstimatorError> {
    let s = buf.len();
    let q = buf.q();
    if s < q + 2 {
        return Err(EstimatorError::InsufficientSamples { have: s, need: q + 2 });
    }
    let mean_x = buf.mean_x();
    let mean_w = buf.mean_w();
    let s_f = s as f64;

    // System matrix and right-hand side; both are the centered Gram forms.
    let mut m = vec![vec![0.0; q]; q];
    let mut rhs = vec![0.0; q];
    for (row, &x) in buf.ws.iter().zip(&buf.xs) {
        for a in 0..q {
            for b in 0..q {
                m[a][b] += row[a] * row[b];
            }
            rhs[a] += row[a] * x;
        }
    }
    for a in 0..q {
        for b in 0..q {
            m[a][b] -= s_f * mean_w[a] * mean_w[b];
        }
        rhs[a] -= s_f * mean_w[a] * mean_x;
    }

    solve_pivoted(m, rhs)
}

/// Point estimate mean_x + beta' (omega - mean_w).
pub fn multi_cv_point_estimate(buf: &MultiSampleBuffer) -> Result<f64, EstimatorError> {
    let beta = multi_beta_hat(buf)?;
    let mean_w = buf.mean_w();
    let correction: f64 = beta
        .iter()
        .zip(buf.omegas())
        .zip(&mean_w)
        .map(|((&b, &omega), &wbar)| b * (omega - wbar))
        .sum();
    Ok(buf.mean_x() + correction)
}

fn solve_pivoted(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Result<Vec<f64>, EstimatorError> {
    let q = rhs.len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);

    for col in 0..q {
        // Partial pivoting.
        let (pivot_row, pivot_abs) = (col..q)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot_abs <= EPS_COND * scale {
            return Err(EstimatorError::SingularSideInfo {
                pivot_ratio: pivot_abs / scale,
            });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for r in col + 1..q {
            let f = m[r][col] / m[col][col];
            for c in col..q {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    // Back substitution.
    let mut beta = vec![0.0; q];
    for col in (0..q).rev() {
        let mut acc = rhs[col];
        for c in col + 1..q {
            acc -= m[col][c] * beta[c];
        }
        beta[col] = acc / m[col][col];
    }
    Ok(beta)
}
