//! Batch experiment runner: seeded replications, regret traces, and CSV
//! output.

use std::fs::File;
use std::io::{self, BufWriter, Write as _};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use super::config::{ConfigError, ExperimentConfig, OmegaMode, PolicySpec};
use crate::env::{Environment, TrueMeans};
use crate::policies::{PolicyKind, PolicyState};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// One played round of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub t: u64,
    pub arm: usize,
    pub reward: f64,
    pub cum_reward: f64,
}

/// Full record of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub policy: PolicyKind,
    pub run: usize,
    pub seed: u64,
    pub mu_star: f64,
    pub rounds: Vec<RoundRecord>,
}

impl RegretTrace {
    pub fn cum_regret_at(&self, t: u64) -> f64 {
        let rec = &self.rounds[t as usize - 1];
        debug_assert_eq!(rec.t, t);
        t as f64 * self.mu_star - rec.cum_reward
    }
}

/// Cumulative regret series t*mu_star - cum_reward(t), one entry per round.
pub fn empirical_regret(trace: &RegretTrace) -> Vec<f64> {
    trace
        .rounds
        .iter()
        .map(|r| r.t as f64 * trace.mu_star - r.cum_reward)
        .collect()
}

/// Replication seed: base seed mixed with the policy name and run index via
/// FNV-1a, so policies and runs get decoupled randomness.
pub fn derive_seed(base: u64, kind: PolicyKind, run: usize) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = FNV_OFFSET;
    for &b in kind.name().as_bytes() {
        h = (h ^ b as u64).wrapping_mul(FNV_PRIME);
    }
    for b in (run as u64).to_le_bytes() {
        h = (h ^ b as u64).wrapping_mul(FNV_PRIME);
    }
    base ^ h
}

/// Play one policy for one seeded replication.
pub fn run_single(
    cfg: &ExperimentConfig,
    policy: &PolicySpec,
    run: usize,
    mu_star: f64,
) -> RegretTrace {
    let seed = derive_seed(cfg.base_seed, policy.kind, run);
    let mut env = Environment::new(cfg.arms.clone(), seed);
    let omegas = match cfg.omega_mode {
        OmegaMode::Exact => env.si_means(),
        OmegaMode::Calibrated { n } => env.calibrate_si_means(n),
    };
    let mut state = PolicyState::new(policy.kind, policy.params(), &omegas);
    let mut rounds = Vec::with_capacity(cfg.horizon as usize);
    let mut cum_reward = 0.0;
    for t in 1..=cfg.horizon {
        let arm = state.select_arm();
        let obs = env.pull(arm);
        state.update(arm, obs);
        cum_reward += obs.reward;
        rounds.push(RoundRecord {
            t,
            arm,
            reward: obs.reward,
            cum_reward,
        });
    }
    RegretTrace {
        policy: policy.kind,
        run,
        seed,
        mu_star,
        rounds,
    }
}

/// Mean regret with standard error at one checkpoint, aggregated over runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub policy: PolicyKind,
    pub checkpoint: u64,
    pub mean_regret: f64,
    pub stderr: f64,
    pub runs: usize,
}

/// Checkpoints T/10, T/2, T, deduplicated for tiny horizons.
pub fn checkpoints(horizon: u64) -> Vec<u64> {
    let mut cps = vec![(horizon / 10).max(1), (horizon / 2).max(1), horizon];
    cps.dedup();
    cps
}

// 17 significant digits round-trips f64 exactly.
fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_trace_csv(path: &Path, trace: &RegretTrace) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    (|| -> io::Result<()> {
        writeln!(w, "t,policy,run,arm,reward,cum_reward,cum_regret")?;
        for r in &trace.rounds {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.t,
                trace.policy.name(),
                trace.run,
                r.arm,
                fmt_f(r.reward),
                fmt_f(r.cum_reward),
                fmt_f(r.t as f64 * trace.mu_star - r.cum_reward),
            )?;
        }
        w.flush()
    })()
    .map_err(io_err(path))
}

fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    (|| -> io::Result<()> {
        writeln!(w, "policy,checkpoint,mean_regret,stderr,runs")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.policy.name(),
                r.checkpoint,
                fmt_f(r.mean_regret),
                fmt_f(r.stderr),
                r.runs,
            )?;
        }
        w.flush()
    })()
    .map_err(io_err(path))
}

/// Outcome of a batch: the per-checkpoint summary and the true means the
/// regret was measured against.
#[derive(Debug, Clone)]
pub struct BatchResult {
    pub summary: Vec<SummaryRow>,
    pub true_means: TrueMeans,
}

/// Run every (policy, replication) pair, optionally writing one CSV per run
/// plus `summary.csv` to `out`. Output is identical for any worker count.
pub fn run_batch(
    cfg: &ExperimentConfig,
    out: Option<&Path>,
    workers: Option<usize>,
) -> Result<BatchResult, HarnessError> {
    cfg.validate()?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let true_means = Environment::new(cfg.arms.clone(), cfg.base_seed).true_means(cfg.n_mc);
    let mu_star = true_means.mu_star;
    let cps = checkpoints(cfg.horizon);

    let jobs: Vec<(usize, usize)> = (0..cfg.policies.len())
        .flat_map(|p| (0..cfg.runs).map(move |r| (p, r)))
        .collect();

    let work = |(p, r): (usize, usize)| -> Result<Vec<f64>, HarnessError> {
        let trace = run_single(cfg, &cfg.policies[p], r, mu_star);
        if let Some(dir) = out {
            let name = format!("{}_run{:04}.csv", cfg.policies[p].kind.name(), r);
            write_trace_csv(&dir.join(name), &trace)?;
        }
        Ok(cps.iter().map(|&t| trace.cum_regret_at(t)).collect())
    };

    let results: Result<Vec<Vec<f64>>, HarnessError> = match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool");
            pool.install(|| jobs.par_iter().map(|&j| work(j)).collect())
        }
        None => jobs.par_iter().map(|&j| work(j)).collect(),
    };
    let results = results?;

    let mut summary = Vec::new();
    for (p, policy) in cfg.policies.iter().enumerate() {
        for (ci, &cp) in cps.iter().enumerate() {
            let vals: Vec<f64> = (0..cfg.runs)
                .map(|r| results[p * cfg.runs + r][ci])
                .collect();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let stderr = if vals.len() > 1 {
                let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            summary.push(SummaryRow {
                policy: policy.kind,
                checkpoint: cp,
                mean_regret: mean,
                stderr,
                runs: vals.len(),
            });
        }
    }
    if let Some(dir) = out {
        write_summary_csv(&dir.join("summary.csv"), &summary)?;
    }
    Ok(BatchResult {
        summary,
        true_means,
    })
}
