//! Stochastic arm models producing (reward, side-information) pairs: jointly
//! Gaussian arms, SINR channel arms with hidden factors, and copula-based
//! non-Gaussian arms, plus side-information mean calibration.

pub mod dist;

use serde::{Deserialize, Serialize};

use crate::cv::ObservationPair;
use crate::error::StatsError;
use crate::stats::{sample_bivariate_gaussian, BivariateGaussianSpec, RandomSource};
pub use dist::{DistSpec, MarginalSpec};

// Stream layout within an environment seed.
const STREAM_PULLS: u64 = 0;
const STREAM_TRUTH: u64 = 1 << 32;
const STREAM_CALIBRATION: u64 = 2 << 32;

/// Shannon spectral efficiency log2(1 + sinr) in bits/s/Hz.
pub fn shannon_rate(sinr: f64) -> Result<f64, StatsError> {
    if !(sinr >= 0.0) {
        return Err(StatsError::Domain {
            name: "sinr",
            value: sinr,
            domain: "[0, inf)",
        });
    }
    Ok(sinr.ln_1p() / core::f64::consts::LN_2)
}

/// Which measured quantity serves as the side-information of an SINR arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiKind {
    /// Interference measured at the transmitter; enters the SINR denominator.
    TxInterference,
    /// Channel gain measured via uplink pilots; scales the signal power.
    ChannelGain,
}

fn default_true() -> bool {
    true
}

/// SINR channel arm. Reward is the Shannon rate of the realized SINR; the
/// side-information is the measured factor named by `si_kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinrArm {
    pub si_kind: SiKind,
    pub power: f64,
    pub gain: DistSpec,
    pub noise: f64,
    pub hidden_interference: DistSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_interference: Option<DistSpec>,
    /// The measured interference is scaled by the channel gain in the
    /// denominator. Set false for the plain unscaled denominator.
    #[serde(default = "default_true")]
    pub scale_interference_by_gain: bool,
}

/// Copula-based arm: arbitrary marginals tied by a Gaussian copula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralArm {
    pub reward: MarginalSpec,
    pub side_info: MarginalSpec,
    pub copula_rho: f64,
}

/// One arm model. Mixed kinds inside an environment are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ArmModel {
    Gaussian {
        mu: f64,
        sigma: f64,
        omega: f64,
        sigma_w: f64,
        rho: f64,
    },
    Sinr(SinrArm),
    General(GeneralArm),
}

impl ArmModel {
    /// Draw one observation; every stochastic factor is drawn fresh.
    pub fn pull(&self, rng: &mut RandomSource) -> ObservationPair {
        match self {
            ArmModel::Gaussian {
                mu,
                sigma,
                omega,
                sigma_w,
                rho,
            } => {
                let spec = BivariateGaussianSpec {
                    mean_x: *mu,
                    mean_w: *omega,
                    std_x: *sigma,
                    std_w: *sigma_w,
                    rho: *rho,
                };
                let (x, w) = sample_bivariate_gaussian(&spec, rng);
                ObservationPair {
                    reward: x,
                    side_info: w,
                }
            }
            ArmModel::Sinr(arm) => {
                let g = arm.gain.sample(rng);
                let i = arm.hidden_interference.sample(rng);
                match arm.si_kind {
                    SiKind::TxInterference => {
                        let w = arm
                            .measured_interference
                            .as_ref()
                            .map(|d| d.sample(rng))
                            .unwrap_or(0.0);
                        let scaled_w = if arm.scale_interference_by_gain { g * w } else { w };
                        let sinr = g * arm.power / (scaled_w + i + arm.noise);
                        ObservationPair {
                            reward: shannon_rate(sinr).expect("sinr >= 0"),
                            side_info: w,
                        }
                    }
                    SiKind::ChannelGain => {
                        let sinr = g * arm.power / (i + arm.noise);
                        ObservationPair {
                            reward: shannon_rate(sinr).expect("sinr >= 0"),
                            side_info: g,
                        }
                    }
                }
            }
            ArmModel::General(arm) => {
                let z1 = rng.standard_normal();
                let z2 = rng.standard_normal();
                let rho = arm.copula_rho;
                let zw = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
                ObservationPair {
                    reward: arm.reward.from_normal(z1),
                    side_info: arm.side_info.from_normal(zw),
                }
            }
        }
    }

    /// Known side-information mean handed to policies (exact-omega mode).
    pub fn si_mean(&self) -> f64 {
        match self {
            ArmModel::Gaussian { omega, .. } => *omega,
            ArmModel::Sinr(arm) => match arm.si_kind {
                SiKind::TxInterference => arm
                    .measured_interference
                    .as_ref()
                    .map(|d| d.mean())
                    .unwrap_or(0.0),
                SiKind::ChannelGain => arm.gain.mean(),
            },
            ArmModel::General(arm) => arm.side_info.mean(),
        }
    }

    /// Analytic mean reward where one exists.
    pub fn analytic_mean(&self) -> Option<f64> {
        match self {
            ArmModel::Gaussian { mu, .. } => Some(*mu),
            ArmModel::General(arm) => Some(arm.reward.mean()),
            ArmModel::Sinr(arm) => {
                // Fully deterministic SINR arms have an exact rate.
                let w_const = match arm.si_kind {
                    SiKind::TxInterference => arm
                        .measured_interference
                        .as_ref()
                        .map(|d| d.is_constant())
                        .unwrap_or(true),
                    SiKind::ChannelGain => true,
                };
                if arm.gain.is_constant() && arm.hidden_interference.is_constant() && w_const {
                    let mut rng = RandomSource::new(0);
                    Some(self.pull(&mut rng).reward)
                } else {
                    None
                }
            }
        }
    }
}

/// Per-arm mean rewards with the optimal arm.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueMeans {
    pub means: Vec<f64>,
    /// Monte-Carlo standard error per arm; zero for analytic means.
    pub stderrs: Vec<f64>,
    pub optimal: usize,
    pub mu_star: f64,
}

/// A bank of K arms sharing one pull stream.
#[derive(Debug, Clone)]
pub struct Environment {
    arms: Vec<ArmModel>,
    seed: u64,
    rng: RandomSource,
}

impl Environment {
    pub fn new(arms: Vec<ArmModel>, seed: u64) -> Self {
        assert!(arms.len() >= 2, "need at least two arms");
        Environment {
            arms,
            seed,
            rng: RandomSource::with_stream(seed, STREAM_PULLS),
        }
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[ArmModel] {
        &self.arms
    }

    pub fn si_means(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.si_mean()).collect()
    }

    pub fn pull(&mut self, i: usize) -> ObservationPair {
        self.arms[i].pull(&mut self.rng)
    }

    /// Per-arm mean rewards: analytic where available, Monte-Carlo (with
    /// standard error) otherwise. Uses dedicated streams, so the pull stream
    /// is untouched and the result is independent of call order.
    pub fn true_means(&self, n_mc: usize) -> TrueMeans {
        let mut means = Vec::with_capacity(self.arms.len());
        let mut stderrs = Vec::with_capacity(self.arms.len());
        for (i, arm) in self.arms.iter().enumerate() {
            if let Some(m) = arm.analytic_mean() {
                means.push(m);
                stderrs.push(0.0);
            } else {
                let mut rng = RandomSource::with_stream(self.seed, STREAM_TRUTH + i as u64);
                let mut sum = 0.0;
                let mut sum_sq = 0.0;
                for _ in 0..n_mc {
                    let r = arm.pull(&mut rng).reward;
                    sum += r;
                    sum_sq += r * r;
                }
                let n = n_mc as f64;
                let mean = sum / n;
                let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
                means.push(mean);
                stderrs.push((var / n).sqrt());
            }
        }
        let optimal = means
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(bi, bm), (i, &m)| {
                if m > bm {
                    (i, m)
                } else {
                    (bi, bm)
                }
            })
            .0;
        let mu_star = means[optimal];
        TrueMeans {
            means,
            stderrs,
            optimal,
            mu_star,
        }
    }

    /// Per-arm sample mean of n side-information draws from a calibration
    /// stream separate from the learning run.
    pub fn calibrate_si_means(&self, n: usize) -> Vec<f64> {
        assert!(n >= 1);
        self.arms
            .iter()
            .enumerate()
            .map(|(i, arm)| {
                let mut rng = RandomSource::with_stream(self.seed, STREAM_CALIBRATION + i as u64);
                (0..n).map(|_| arm.pull(&mut rng).side_info).sum::<f64>() / n as f64
            })
            .collect()
    }
}
