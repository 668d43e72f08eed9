//! Acceptance gate: one test per criterion, each printing a pass/fail line
//! (visible with `--nocapture`). The heavy regret batches are shared between
//! criteria through lazy statics.

use std::sync::OnceLock;
use std::time::Instant;

use cvbandit::cv::{
    beta_hat, cv_point_estimate, cv_point_estimate_with, cv_variance_estimate,
    cv_variance_estimate_with, confidence_radius, multi_beta_hat, split_estimate,
    split_transformed_samples, transform_sample, BetaCentering, MultiSampleBuffer, SampleBuffer,
    VarianceFormula,
};
use cvbandit::harness::{
    bound_params_from_arms, empirical_regret, gaussian_suite, run_batch, sinr_suite,
    theoretical_regret_bound, theoretical_regret_bound_with_v, BatchResult, BoundParams,
    ExperimentConfig, OmegaMode, PolicySpec, RegretTrace, RoundRecord, SummaryRow, VarianceSet,
};
use cvbandit::policies::{ucb1_normal_index, ucbwsi_split_index, ArmState, PolicyKind};
use cvbandit::stats::{
    percentile_v, sample_bivariate_gaussian, t_quantile, BivariateGaussianSpec, RandomSource,
};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:02} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn gaussian_pairs(rho: f64, seed: u64) -> (BivariateGaussianSpec, RandomSource) {
    let spec = BivariateGaussianSpec::new(1.0, 0.5, 1.0, 1.0, rho).expect("valid spec");
    (spec, RandomSource::with_stream(seed, 0))
}

fn variance(vals: &[f64]) -> f64 {
    let n = vals.len() as f64;
    let m = vals.iter().sum::<f64>() / n;
    vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
}

// ---- criterion 1: known-coefficient variance law ---------------------------

#[test]
fn criterion_01_variance_law() {
    let reps = 100_000;
    let mut worst = 0.0f64;
    for &rho in &[0.0, 0.5, 0.9] {
        for &s in &[5usize, 20] {
            let (spec, mut rng) = gaussian_pairs(rho, 101);
            let beta = rho; // Cov(X,W)/Var(W) with unit standard deviations
            let means: Vec<f64> = (0..reps)
                .map(|_| {
                    (0..s)
                        .map(|_| {
                            let (x, w) = sample_bivariate_gaussian(&spec, &mut rng);
                            transform_sample(x, w, spec.mean_w, beta)
                        })
                        .sum::<f64>()
                        / s as f64
                })
                .collect();
            let target = (1.0 - rho * rho) / s as f64;
            let rel = (variance(&means) - target).abs() / target;
            worst = worst.max(rel);
        }
    }
    report(
        1,
        "known-beta variance law",
        worst < 0.03,
        &format!("worst relative error {worst:.4} over rho x s grid"),
    );
}

// ---- criterion 2: estimated-coefficient inflation factor -------------------

// The (s-2)/(s-3)(1-rho^2) inflation law describes the sample-mean-centered
// coefficient (the classical regression slope); the known-mean-centered
// default deviates from it at small s, so the law is checked on the
// sample-centered variant and the default's deviation is recorded.
#[test]
fn criterion_02_inflation_factor() {
    let reps = 100_000;
    let mut worst = 0.0f64;
    let mut worst_known = 0.0f64;
    for &s in &[5usize, 10, 40] {
        for &rho in &[0.5, 0.9] {
            let (spec, mut rng) = gaussian_pairs(rho, 202);
            let mut cv_means = Vec::with_capacity(reps);
            let mut known_means = Vec::with_capacity(reps);
            let mut plain_means = Vec::with_capacity(reps);
            for _ in 0..reps {
                let mut buf = SampleBuffer::new(spec.mean_w);
                for _ in 0..s {
                    let (x, w) = sample_bivariate_gaussian(&spec, &mut rng);
                    buf.push(x, w);
                }
                cv_means.push(
                    cv_point_estimate_with(&buf, BetaCentering::SampleMean)
                        .expect("nondegenerate"),
                );
                known_means.push(cv_point_estimate(&buf).expect("nondegenerate"));
                plain_means.push(buf.mean_x());
            }
            let plain_var = variance(&plain_means);
            let sf = s as f64;
            let target = (sf - 2.0) / (sf - 3.0) * (1.0 - rho * rho);
            let rel = (variance(&cv_means) / plain_var - target).abs() / target;
            worst = worst.max(rel);
            worst_known = worst_known.max((variance(&known_means) / plain_var - target).abs() / target);
        }
    }
    println!(
        "criterion 02 note: known-mean-centered default deviates from the law by up to {worst_known:.4}"
    );
    report(
        2,
        "estimated-beta inflation factor",
        worst < 0.05,
        &format!("worst relative error {worst:.4} over s x rho grid (sample-centered coefficient)"),
    );
}

// ---- criterion 3: variance-estimator unbiasedness --------------------------

// Unbiasedness is exact for the regression-prediction variance paired with
// the sample-centered estimator it describes; the inverted-correction
// formula is run under the same oracle to document its failure.
#[test]
fn criterion_03_variance_estimator_unbiased() {
    let (s, reps) = (10usize, 100_000usize);
    let (spec, mut rng) = gaussian_pairs(0.8, 303);
    let mut means = Vec::with_capacity(reps);
    let mut vhats = Vec::with_capacity(reps);
    let mut vhats_literal = Vec::with_capacity(reps);
    for _ in 0..reps {
        let mut buf = SampleBuffer::new(spec.mean_w);
        for _ in 0..s {
            let (x, w) = sample_bivariate_gaussian(&spec, &mut rng);
            buf.push(x, w);
        }
        means.push(
            cv_point_estimate_with(&buf, BetaCentering::SampleMean).expect("nondegenerate"),
        );
        vhats.push(
            cv_variance_estimate_with(
                &buf,
                VarianceFormula::RegressionPrediction,
                BetaCentering::SampleMean,
            )
            .expect("nondegenerate"),
        );
        vhats_literal.push(
            cv_variance_estimate_with(&buf, VarianceFormula::InvertedCorrection, BetaCentering::SampleMean)
                .expect("nondegenerate"),
        );
    }
    let n = reps as f64;
    let true_var = variance(&means);
    let mean_v = vhats.iter().sum::<f64>() / n;
    let se = (variance(&vhats) / n).sqrt() + true_var * (2.0 / n).sqrt();
    let bias = (mean_v - true_var).abs();

    let mean_v_lit = vhats_literal.iter().sum::<f64>() / n;
    let se_lit = (variance(&vhats_literal) / n).sqrt() + true_var * (2.0 / n).sqrt();
    let bias_lit_ses = (mean_v_lit - true_var).abs() / se_lit;
    println!(
        "criterion 03 note: inverted-correction variance formula bias = {:.3e} ({bias_lit_ses:.1} standard errors; expected to miss)",
        mean_v_lit - true_var
    );

    report(
        3,
        "variance estimator unbiased",
        bias <= 3.0 * se,
        &format!("|E[vhat] - Var| = {bias:.3e} vs 3 SE = {:.3e}", 3.0 * se),
    );
}

// ---- criterion 4: confidence-radius coverage -------------------------------

#[test]
fn criterion_04_coverage() {
    let (s, t, reps) = (20usize, 50u64, 100_000usize);
    let (spec, mut rng) = gaussian_pairs(0.8, 404);
    let mut misses = 0usize;
    for _ in 0..reps {
        let mut buf = SampleBuffer::new(spec.mean_w);
        for _ in 0..s {
            let (x, w) = sample_bivariate_gaussian(&spec, &mut rng);
            buf.push(x, w);
        }
        let m = cv_point_estimate(&buf).expect("nondegenerate");
        let r = confidence_radius(&buf, t, 2.0).expect("nondegenerate");
        if (m - spec.mean_x).abs() >= r {
            misses += 1;
        }
    }
    let p = misses as f64 / reps as f64;
    report(
        4,
        "confidence radius coverage",
        p <= 1.5e-3,
        &format!("miss rate {p:.2e} (cap 1.5e-3, nominal 2/t^2 = 8e-4)"),
    );
}

// ---- criterion 5: percentile numeric bound ---------------------------------

#[test]
fn criterion_05_percentile_bound() {
    let mut pass = true;
    let mut detail = String::new();
    for &t in &[100u64, 1000, 5000] {
        let v = percentile_v(t, 2.0, t - 2).expect("valid percentile arguments");
        let cap = 3.726 * (t as f64).ln();
        pass &= v <= cap;
        detail.push_str(&format!("T={t}: {v:.4} <= {cap:.4}; "));
    }
    report(5, "percentile numeric bound", pass, detail.trim_end());
}

// ---- criteria 6 and 7: regret batches --------------------------------------

const BATCH_RUNS: usize = 200;
const BATCH_HORIZON: u64 = 5000;
const BATCH_SEED: u64 = 2024;

fn all_policies() -> Vec<PolicySpec> {
    vec![
        PolicySpec::new(PolicyKind::UcbWsi),
        PolicySpec::new(PolicyKind::UcbWsiSplit),
        PolicySpec::new(PolicyKind::Ucb1Normal),
        PolicySpec::new(PolicyKind::UcbV),
    ]
}

fn batch_config(arms: Vec<cvbandit::env::ArmModel>) -> ExperimentConfig {
    ExperimentConfig {
        horizon: BATCH_HORIZON,
        runs: BATCH_RUNS,
        base_seed: BATCH_SEED,
        policies: all_policies(),
        arms,
        omega_mode: OmegaMode::Exact,
        output_dir: None,
        n_mc: 200_000,
        bound_c: 1.5,
    }
}

static GAUSSIAN_BATCH: OnceLock<BatchResult> = OnceLock::new();
static SINR_BATCH: OnceLock<BatchResult> = OnceLock::new();

fn gaussian_batch() -> &'static BatchResult {
    GAUSSIAN_BATCH
        .get_or_init(|| run_batch(&batch_config(gaussian_suite(0.8)), None, None).expect("batch"))
}

fn sinr_batch() -> &'static BatchResult {
    SINR_BATCH.get_or_init(|| {
        run_batch(
            &batch_config(sinr_suite(VarianceSet::High)),
            None,
            None,
        )
        .expect("batch")
    })
}

fn final_regret(rows: &[SummaryRow], kind: PolicyKind) -> f64 {
    rows.iter()
        .find(|r| r.policy == kind && r.checkpoint == BATCH_HORIZON)
        .expect("summary row")
        .mean_regret
}

#[test]
fn criterion_06_bound_dominance() {
    let start = Instant::now();
    let batch = gaussian_batch();
    let arms = gaussian_suite(0.8);
    let params = bound_params_from_arms(
        &arms,
        &batch.true_means.means,
        batch.true_means.optimal,
        1.5,
        2.0,
        200_000,
        BATCH_SEED,
    );
    let bound = theoretical_regret_bound(&params, BATCH_HORIZON);
    let regret = final_regret(&batch.summary, PolicyKind::UcbWsi);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        "regret bound dominance",
        regret <= bound && elapsed < 600.0,
        &format!("mean regret {regret:.1} <= bound {bound:.1} ({elapsed:.0}s)"),
    );
}

#[test]
fn criterion_07_qualitative_ordering() {
    let mut pass = true;
    let mut detail = String::new();
    for (label, batch) in [("gaussian", gaussian_batch()), ("sinr", sinr_batch())] {
        let wsi = final_regret(&batch.summary, PolicyKind::UcbWsi);
        let ucbv = final_regret(&batch.summary, PolicyKind::UcbV);
        let normal = final_regret(&batch.summary, PolicyKind::Ucb1Normal);
        pass &= wsi <= 0.7 * ucbv && wsi <= 0.7 * normal;
        detail.push_str(&format!(
            "{label}: wsi {wsi:.1}, ucbv {ucbv:.1}, ucb1_normal {normal:.1}; "
        ));
        if label == "gaussian" {
            let split = final_regret(&batch.summary, PolicyKind::UcbWsiSplit);
            pass &= (split - wsi).abs() <= 0.10 * wsi;
            detail.push_str(&format!("split {split:.1}; "));
        }
    }
    report(7, "qualitative regret ordering", pass, detail.trim_end());
}

// ---- criterion 8: hand-arithmetic unit vectors -----------------------------

#[test]
fn criterion_08_hand_arithmetic() {
    let tol = 1e-12;
    let close = |a: f64, b: f64| (a - b).abs() <= tol * b.abs().max(1.0);
    let mut pass = true;

    // Transformed sample.
    pass &= close(transform_sample(1.0, 1.0, 2.0, 0.5), 1.5);

    // Coefficient estimate with known-mean centering, omega off the sample mean.
    let buf = SampleBuffer::from_pairs(3.0, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
    pass &= close(beta_hat(&buf).unwrap(), 0.4);
    pass &= close(cv_point_estimate(&buf).unwrap(), 2.4);

    // Variance estimate on the 4-sample buffer.
    let buf4 = SampleBuffer::from_pairs(2.5, &[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 4.0, 3.0]);
    pass &= close(cv_variance_estimate(&buf4).unwrap(), 0.225);

    // Splitting samples and estimate.
    let buf3 = SampleBuffer::from_pairs(2.0, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
    let samples = split_transformed_samples(&buf3).unwrap();
    pass &= close(samples[0], 1.5) && close(samples[1], 2.0) && close(samples[2], 2.5);
    let (sm, sv) = split_estimate(&buf3).unwrap();
    pass &= close(sm, 2.0) && close(sv, 0.5 / 6.0);

    // Split index composition; dof 2 has a closed-form quantile.
    let arm = ArmState {
        buffer: buf3.clone(),
        pulls: 3,
    };
    let idx = ucbwsi_split_index(&arm, 10, 2.0).unwrap();
    let t99_dof2 = 0.98 / (2.0 * 0.01 * 0.99f64).sqrt(); // 6.96456
    pass &= (t_quantile(0.99, 2).unwrap() - t99_dof2).abs() < 1e-10;
    pass &= close(idx, sm + t99_dof2 * sv.sqrt());

    // Baseline index hand values.
    let normal_arm = ArmState {
        buffer: SampleBuffer::from_pairs(0.0, &[0.0, 2.0], &[0.0, 0.0]),
        pulls: 2,
    };
    pass &= close(
        ucb1_normal_index(&normal_arm, 10).unwrap(),
        1.0 + (16.0 * 9.0f64.ln()).sqrt(),
    );

    // UCB-V at ln t = 2: mean 1, Vhat 1, index 1 + sqrt(2) + 3.
    let (vhat, n, zeta, c, ln_t) = (1.0f64, 2.0f64, 1.0f64, 1.0f64, 2.0f64);
    let ucbv = 1.0 + (2.0 * vhat * zeta * ln_t / n).sqrt() + 3.0 * c * zeta * ln_t / n;
    pass &= close(ucbv, 1.0 + core::f64::consts::SQRT_2 + 3.0);

    // Regret series.
    let trace = RegretTrace {
        policy: PolicyKind::UcbWsi,
        run: 0,
        seed: 0,
        mu_star: 5.0,
        rounds: vec![
            RoundRecord { t: 1, arm: 0, reward: 5.0, cum_reward: 5.0 },
            RoundRecord { t: 2, arm: 1, reward: 3.0, cum_reward: 8.0 },
            RoundRecord { t: 3, arm: 0, reward: 5.0, cum_reward: 13.0 },
        ],
    };
    pass &= empirical_regret(&trace)
        .iter()
        .zip(&[0.0, 2.0, 2.0])
        .all(|(a, b)| close(*a, *b));

    // Bound values.
    let pi_sq_3 = core::f64::consts::PI * core::f64::consts::PI / 3.0;
    let perfect = BoundParams {
        deltas: vec![1.0],
        rhos: vec![1.0],
        sigma_sqs: vec![1.0],
        c: 1.5,
        alpha: 2.0,
    };
    pass &= close(
        theoretical_regret_bound_with_v(&perfect, 3.0),
        8.0 * (pi_sq_3 + 1.0),
    );
    let typical = BoundParams {
        rhos: vec![0.8],
        ..perfect
    };
    pass &= close(
        theoretical_regret_bound_with_v(&typical, 3.0),
        8.0 * (9.0 * 1.5 * 0.36 + pi_sq_3 + 1.0),
    );

    report(8, "hand-arithmetic unit vectors", pass, "all pinned values at 1e-12");
}

// ---- criterion 9: multi-coefficient least-squares oracle -------------------

#[test]
fn criterion_09_multi_beta_oracle() {
    let (s, q) = (50usize, 3usize);
    let mut rng = RandomSource::with_stream(909, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let omegas: Vec<f64> = (0..q).map(|_| rng.standard_normal()).collect();
        let mut buf = MultiSampleBuffer::new(omegas.clone());
        let mut rows = Vec::with_capacity(s);
        let mut xs = Vec::with_capacity(s);
        for _ in 0..s {
            let w_row: Vec<f64> = omegas.iter().map(|o| o + rng.standard_normal()).collect();
            let x = 1.0
                + w_row
                    .iter()
                    .enumerate()
                    .map(|(j, w)| (j as f64 + 1.0) * 0.3 * w)
                    .sum::<f64>()
                + 0.5 * rng.standard_normal();
            rows.push(w_row.clone());
            xs.push(x);
            buf.push(x, w_row);
        }
        let beta = multi_beta_hat(&buf).expect("well conditioned");

        // Independent oracle: least squares of centered X on centered W.
        let mw: Vec<f64> = (0..q)
            .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / s as f64)
            .collect();
        let mx = xs.iter().sum::<f64>() / s as f64;
        let a = nalgebra::DMatrix::from_fn(s, q, |i, j| rows[i][j] - mw[j]);
        let b = nalgebra::DVector::from_fn(s, |i, _| xs[i] - mx);
        let sol = (a.transpose() * &a)
            .lu()
            .solve(&(a.transpose() * b))
            .expect("nonsingular");
        for j in 0..q {
            let rel = (beta[j] - sol[j]).abs() / sol[j].abs().max(1e-6);
            worst = worst.max(rel);
        }
    }
    report(
        9,
        "multi-coefficient least-squares oracle",
        worst <= 1e-9,
        &format!("worst relative deviation {worst:.2e} over 100 instances"),
    );
}

// ---- criterion 10: byte-identical CSV determinism --------------------------

#[test]
fn criterion_10_csv_determinism() {
    let cfg = ExperimentConfig {
        horizon: 400,
        runs: 4,
        base_seed: 77,
        policies: all_policies(),
        arms: gaussian_suite(0.8),
        omega_mode: OmegaMode::Exact,
        output_dir: None,
        n_mc: 5000,
        bound_c: 1.5,
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let d3 = tempfile::tempdir().unwrap();
    run_batch(&cfg, Some(d1.path()), Some(1)).unwrap();
    run_batch(&cfg, Some(d2.path()), Some(4)).unwrap();
    run_batch(&cfg, Some(d3.path()), Some(1)).unwrap();
    let mut pass = true;
    let mut files = 0;
    for entry in std::fs::read_dir(d1.path()).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(d1.path().join(&name)).unwrap();
        let b = std::fs::read(d2.path().join(&name)).unwrap();
        let c = std::fs::read(d3.path().join(&name)).unwrap();
        pass &= a == b && a == c;
        files += 1;
    }
    pass &= files == 4 * 4 + 1;
    report(
        10,
        "byte-identical CSV determinism",
        pass,
        &format!("{files} files compared across worker counts 1, 4 and a replay"),
    );
}
