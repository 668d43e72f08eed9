//! Sequential decision policies: UCBwSI, UCBwSI-Split, and the
//! variance-aware baselines UCB1-Normal and UCB-V, as deterministic state
//! machines over per-arm sample buffers.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cv::{cv_point_estimate, cv_variance_estimate, split_estimate, ObservationPair, SampleBuffer};
use crate::error::EstimatorError;
use crate::stats::percentile_v;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolicyKind {
    #[serde(rename = "ucbwsi")]
    UcbWsi,
    #[serde(rename = "ucbwsi_split")]
    UcbWsiSplit,
    #[serde(rename = "ucb1_normal")]
    Ucb1Normal,
    #[serde(rename = "ucbv")]
    UcbV,
}

impl PolicyKind {
    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::UcbWsi => "ucbwsi",
            PolicyKind::UcbWsiSplit => "ucbwsi_split",
            PolicyKind::Ucb1Normal => "ucb1_normal",
            PolicyKind::UcbV => "ucbv",
        }
    }
}

/// Tunables shared by all policy kinds. `zeta` and `c` only matter for UCB-V.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyParams {
    pub alpha: f64,
    pub zeta: f64,
    pub c: f64,
    pub init_pulls: usize,
}

impl Default for PolicyParams {
    fn default() -> Self {
        PolicyParams {
            alpha: 2.0,
            zeta: 1.2,
            c: 1.0,
            init_pulls: 4,
        }
    }
}

/// Per-arm buffer plus its pull count. The pull count always equals the
/// buffer length.
#[derive(Debug, Clone)]
pub struct ArmState {
    pub buffer: SampleBuffer,
    pub pulls: usize,
}

impl ArmState {
    pub fn new(omega: f64) -> Self {
        ArmState {
            buffer: SampleBuffer::new(omega),
            pulls: 0,
        }
    }
}

/// The UCB index is a point estimate plus a scaled radius; `VScaled` kinds
/// take their radius from the Student-t percentile at the stated degrees of
/// freedom, `Direct` kinds are self-contained.
enum IndexCore {
    VScaled { mean: f64, sd: f64, dof: u64 },
    Direct(f64),
}

fn ucbwsi_core(arm: &ArmState, params: &PolicyParams) -> Result<IndexCore, EstimatorError> {
    if arm.pulls < params.init_pulls.max(4) {
        return Err(EstimatorError::InsufficientSamples {
            have: arm.pulls,
            need: params.init_pulls.max(4),
        });
    }
    match (cv_point_estimate(&arm.buffer), cv_variance_estimate(&arm.buffer)) {
        (Ok(mean), Ok(variance)) => Ok(IndexCore::VScaled {
            mean,
            sd: variance.sqrt(),
            dof: arm.pulls as u64 - 2,
        }),
        // Degenerate SI: the arm keeps running on the plain-mean estimator
        // with N - 1 degrees of freedom for this round.
        (Err(EstimatorError::DegenerateSideInfo { .. }), _)
        | (_, Err(EstimatorError::DegenerateSideInfo { .. })) => {
            let (mean, variance) = arm.buffer.plain_estimate()?;
            Ok(IndexCore::VScaled {
                mean,
                sd: variance.sqrt(),
                dof: arm.pulls as u64 - 1,
            })
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

fn ucbwsi_split_core(arm: &ArmState, params: &PolicyParams) -> Result<IndexCore, EstimatorError> {
    // The leave-one-out estimator itself needs only 3 samples.
    if arm.pulls < params.init_pulls.max(3) {
        return Err(EstimatorError::InsufficientSamples {
            have: arm.pulls,
            need: params.init_pulls.max(3),
        });
    }
    match split_estimate(&arm.buffer) {
        Ok((mean, variance)) => Ok(IndexCore::VScaled {
            mean,
            sd: variance.sqrt(),
            dof: arm.pulls as u64 - 1,
        }),
        Err(EstimatorError::DegenerateSideInfo { .. }) => {
            let (mean, variance) = arm.buffer.plain_estimate()?;
            Ok(IndexCore::VScaled {
                mean,
                sd: variance.sqrt(),
                dof: arm.pulls as u64 - 1,
            })
        }
        Err(e) => Err(e),
    }
}

fn ucb1_normal_core(arm: &ArmState, t: u64) -> Result<IndexCore, EstimatorError> {
    if arm.pulls < 2 {
        return Err(EstimatorError::InsufficientSamples {
            have: arm.pulls,
            need: 2,
        });
    }
    let n = arm.pulls as f64;
    let mean = arm.buffer.mean_x();
    let ssd = arm.buffer.ssd_x();
    let radicand = (16.0 * ssd / (n - 1.0) * ((t as f64 - 1.0).ln()) / n).max(0.0);
    Ok(IndexCore::Direct(mean + radicand.sqrt()))
}

fn ucbv_core(arm: &ArmState, t: u64, zeta: f64, c: f64) -> Result<IndexCore, EstimatorError> {
    if arm.pulls < 1 {
        return Err(EstimatorError::InsufficientSamples {
            have: arm.pulls,
            need: 1,
        });
    }
    let n = arm.pulls as f64;
    let mean = arm.buffer.mean_x();
    let vhat = arm.buffer.ssd_x() / n; // biased empirical variance
    let ln_t = (t as f64).ln();
    Ok(IndexCore::Direct(
        mean + (2.0 * vhat * zeta * ln_t / n).sqrt() + 3.0 * c * zeta * ln_t / n,
    ))
}

/// UCBwSI index: control-variate point estimate plus its confidence radius
/// with N - 2 degrees of freedom.
pub fn ucbwsi_index(arm: &ArmState, t: u64, alpha: f64) -> Result<f64, EstimatorError> {
    let params = PolicyParams {
        alpha,
        ..PolicyParams::default()
    };
    resolve_index(ucbwsi_core(arm, &params)?, t, alpha)
}

/// UCBwSI-Split index: splitting estimate plus its radius with N - 1 degrees
/// of freedom. Defined from 3 samples on, the estimator's own minimum.
pub fn ucbwsi_split_index(arm: &ArmState, t: u64, alpha: f64) -> Result<f64, EstimatorError> {
    let params = PolicyParams {
        alpha,
        init_pulls: 3,
        ..PolicyParams::default()
    };
    resolve_index(ucbwsi_split_core(arm, &params)?, t, alpha)
}

/// UCB1-Normal baseline index.
pub fn ucb1_normal_index(arm: &ArmState, t: u64) -> Result<f64, EstimatorError> {
    match ucb1_normal_core(arm, t)? {
        IndexCore::Direct(v) => Ok(v),
        IndexCore::VScaled { .. } => unreachable!(),
    }
}

/// UCB-V baseline index.
pub fn ucbv_index(arm: &ArmState, t: u64, zeta: f64, c: f64) -> Result<f64, EstimatorError> {
    match ucbv_core(arm, t, zeta, c)? {
        IndexCore::Direct(v) => Ok(v),
        IndexCore::VScaled { .. } => unreachable!(),
    }
}

fn resolve_index(core: IndexCore, t: u64, alpha: f64) -> Result<f64, EstimatorError> {
    match core {
        IndexCore::Direct(v) => Ok(v),
        IndexCore::VScaled { mean, sd, dof } => {
            let v = percentile_v(t, alpha, dof).expect("valid percentile arguments");
            Ok(mean + v * sd)
        }
    }
}

/// One policy's arms, pull counts, and round counter.
///
/// Strictly alternates `select_arm` / `update`. Arm indices are zero-based.
#[derive(Debug, Clone)]
pub struct PolicyState {
    kind: PolicyKind,
    params: PolicyParams,
    arms: Vec<ArmState>,
    round: u64,
    // percentile_v memo keyed by (t, dof); index computation dominates the
    // per-round cost without it
    v_cache: HashMap<(u64, u64), f64>,
}

impl PolicyState {
    pub fn new(kind: PolicyKind, params: PolicyParams, omegas: &[f64]) -> Self {
        assert!(omegas.len() >= 2, "need at least two arms");
        assert!(params.alpha > 1.0, "alpha must exceed 1");
        PolicyState {
            kind,
            params,
            arms: omegas.iter().map(|&omega| ArmState::new(omega)).collect(),
            round: 0,
            v_cache: HashMap::new(),
        }
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn params(&self) -> &PolicyParams {
        &self.params
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arm(&self, i: usize) -> &ArmState {
        &self.arms[i]
    }

    pub fn pulls(&self) -> Vec<usize> {
        self.arms.iter().map(|a| a.pulls).collect()
    }

    fn v_cached(&mut self, t: u64, dof: u64) -> f64 {
        let alpha = self.params.alpha;
        *self
            .v_cache
            .entry((t, dof))
            .or_insert_with(|| percentile_v(t, alpha, dof).expect("valid percentile arguments"))
    }

    /// Current index of one arm at round t = rounds completed so far.
    pub fn index_of(&mut self, i: usize) -> Result<f64, EstimatorError> {
        let t = self.round;
        let core = match self.kind {
            PolicyKind::UcbWsi => ucbwsi_core(&self.arms[i], &self.params)?,
            PolicyKind::UcbWsiSplit => ucbwsi_split_core(&self.arms[i], &self.params)?,
            PolicyKind::Ucb1Normal => ucb1_normal_core(&self.arms[i], t)?,
            PolicyKind::UcbV => ucbv_core(&self.arms[i], t, self.params.zeta, self.params.c)?,
        };
        Ok(match core {
            IndexCore::Direct(v) => v,
            IndexCore::VScaled { mean, sd, dof } => mean + self.v_cached(t, dof) * sd,
        })
    }

    /// Arm to play this round: round-robin 0..K during forced initialization,
    /// argmax of the policy index afterwards, ties to the lowest arm index.
    pub fn select_arm(&mut self) -> usize {
        let k = self.arms.len();
        if (self.round as usize) < k * self.params.init_pulls {
            return self.round as usize % k;
        }
        let mut best = 0;
        let mut best_index = self.index_of(0).expect("initialized arm");
        for i in 1..k {
            let idx = self.index_of(i).expect("initialized arm");
            if idx > best_index {
                best = i;
                best_index = idx;
            }
        }
        best
    }

    /// Record the observation for the arm played this round.
    pub fn update(&mut self, arm: usize, obs: ObservationPair) {
        self.arms[arm].buffer.push_pair(obs);
        self.arms[arm].pulls += 1;
        self.round += 1;
    }
}
