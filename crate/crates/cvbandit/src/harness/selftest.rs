//! Fast Monte-Carlo invariant checks behind `cvbandit selftest`.

use crate::cv::{
    cv_point_estimate_with, cv_variance_estimate_with, transform_sample, BetaCentering,
    SampleBuffer, VarianceFormula,
};
use crate::env::ArmModel;
use crate::harness::bound::{theoretical_regret_bound_with_v, BoundParams};
use crate::harness::config::{ExperimentConfig, OmegaMode, PolicySpec};
use crate::harness::run::run_batch;
use crate::policies::PolicyKind;
use crate::stats::{percentile_v, sample_bivariate_gaussian, BivariateGaussianSpec, RandomSource};

#[derive(Debug, Clone)]
pub struct SelfCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> SelfCheck {
    SelfCheck { name, pass, detail }
}

fn spec(rho: f64) -> BivariateGaussianSpec {
    BivariateGaussianSpec::new(1.0, 0.5, 1.0, 1.0, rho).expect("valid spec")
}

/// Known-coefficient transformed mean has variance (1 - rho^2) sigma^2 / s.
fn known_beta_variance_law() -> SelfCheck {
    let (rho, s, reps) = (0.9, 20usize, 20_000usize);
    let sp = spec(rho);
    let beta = rho; // Cov/Var(W) with unit stds
    let mut rng = RandomSource::with_stream(1, 0);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..reps {
        let mut acc = 0.0;
        for _ in 0..s {
            let (x, w) = sample_bivariate_gaussian(&sp, &mut rng);
            acc += transform_sample(x, w, sp.mean_w, beta);
        }
        let m = acc / s as f64;
        sum += m;
        sum_sq += m * m;
    }
    let n = reps as f64;
    let var = (sum_sq / n - (sum / n) * (sum / n)) * n / (n - 1.0);
    let target = (1.0 - rho * rho) / s as f64;
    let rel = (var - target).abs() / target;
    check(
        "known-beta variance law",
        rel < 0.05,
        format!("var {var:.6e} vs {target:.6e} (rel err {rel:.3})"),
    )
}

/// The sample-centered estimated coefficient inflates the law by (s-2)/(s-3).
fn estimated_beta_inflation() -> SelfCheck {
    let (rho, s, reps) = (0.5, 10usize, 20_000usize);
    let sp = spec(rho);
    let mut rng = RandomSource::with_stream(2, 0);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..reps {
        let mut buf = SampleBuffer::new(sp.mean_w);
        for _ in 0..s {
            let (x, w) = sample_bivariate_gaussian(&sp, &mut rng);
            buf.push(x, w);
        }
        let m = cv_point_estimate_with(&buf, BetaCentering::SampleMean).expect("nondegenerate");
        sum += m;
        sum_sq += m * m;
    }
    let n = reps as f64;
    let var = (sum_sq / n - (sum / n) * (sum / n)) * n / (n - 1.0);
    let sf = s as f64;
    let target = (sf - 2.0) / (sf - 3.0) * (1.0 - rho * rho) / sf;
    let rel = (var - target).abs() / target;
    check(
        "estimated-beta inflation factor",
        rel < 0.08,
        format!("var {var:.6e} vs {target:.6e} (rel err {rel:.3})"),
    )
}

/// The variance estimator is unbiased for the estimator's true variance.
fn variance_estimator_unbiased() -> SelfCheck {
    let (rho, s, reps) = (0.8, 10usize, 20_000usize);
    let sp = spec(rho);
    let mut rng = RandomSource::with_stream(3, 0);
    let (mut sum_m, mut sum_m_sq, mut sum_v, mut sum_v_sq) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..reps {
        let mut buf = SampleBuffer::new(sp.mean_w);
        for _ in 0..s {
            let (x, w) = sample_bivariate_gaussian(&sp, &mut rng);
            buf.push(x, w);
        }
        let m = cv_point_estimate_with(&buf, BetaCentering::SampleMean).expect("nondegenerate");
        let v = cv_variance_estimate_with(
            &buf,
            VarianceFormula::RegressionPrediction,
            BetaCentering::SampleMean,
        )
        .expect("nondegenerate");
        sum_m += m;
        sum_m_sq += m * m;
        sum_v += v;
        sum_v_sq += v * v;
    }
    let n = reps as f64;
    let var_m = (sum_m_sq / n - (sum_m / n) * (sum_m / n)) * n / (n - 1.0);
    let mean_v = sum_v / n;
    let se_v = (((sum_v_sq / n - mean_v * mean_v) * n / (n - 1.0)) / n).sqrt();
    // var_m itself carries Monte-Carlo noise of roughly sqrt(2/n) relative.
    let slack = 3.0 * se_v + 3.0 * var_m * (2.0 / n).sqrt();
    check(
        "variance estimator unbiased",
        (mean_v - var_m).abs() <= slack,
        format!("E[vhat] {mean_v:.6e} vs Var {var_m:.6e} (slack {slack:.2e})"),
    )
}

/// Numeric percentile bound used by the regret analysis.
fn percentile_bound() -> SelfCheck {
    let mut pass = true;
    let mut detail = String::new();
    for &t in &[100u64, 1000, 5000] {
        let v = percentile_v(t, 2.0, t - 2).expect("valid percentile arguments");
        let cap = 3.726 * (t as f64).ln();
        pass &= v <= cap;
        detail.push_str(&format!("T={t}: V={v:.4} cap={cap:.4}; "));
    }
    check("percentile numeric bound", pass, detail)
}

/// Regret bound hand value with a pinned percentile factor.
fn bound_hand_value() -> SelfCheck {
    let p = BoundParams {
        deltas: vec![1.0],
        rhos: vec![0.8],
        sigma_sqs: vec![1.0],
        c: 1.5,
        alpha: 2.0,
    };
    let b = theoretical_regret_bound_with_v(&p, 3.0);
    check(
        "regret bound hand value",
        (b - 73.1993).abs() < 1e-3,
        format!("bound {b:.4} vs 73.1993"),
    )
}

/// Same config and seed reproduce identical summaries.
fn replay_determinism() -> SelfCheck {
    let cfg = ExperimentConfig {
        horizon: 80,
        runs: 2,
        base_seed: 11,
        policies: vec![
            PolicySpec::new(PolicyKind::UcbWsi),
            PolicySpec::new(PolicyKind::Ucb1Normal),
        ],
        arms: vec![
            ArmModel::Gaussian { mu: 1.0, sigma: 1.0, omega: 0.0, sigma_w: 1.0, rho: 0.7 },
            ArmModel::Gaussian { mu: 0.0, sigma: 1.0, omega: 0.0, sigma_w: 1.0, rho: 0.7 },
        ],
        omega_mode: OmegaMode::Exact,
        output_dir: None,
        n_mc: 1000,
        bound_c: 1.5,
    };
    let a = run_batch(&cfg, None, Some(1)).map(|r| r.summary);
    let b = run_batch(&cfg, None, Some(2)).map(|r| r.summary);
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let same = a == b;
            check("replay determinism", same, format!("{} summary rows", a.len()))
        }
        (a, b) => check("replay determinism", false, format!("{a:?} vs {b:?}")),
    }
}

/// Run the whole suite; each check is seeded independently.
pub fn run_selftest() -> Vec<SelfCheck> {
    vec![
        known_beta_variance_law(),
        estimated_beta_inflation(),
        variance_estimator_unbiased(),
        percentile_bound(),
        bound_hand_value(),
        replay_determinism(),
    ]
}
