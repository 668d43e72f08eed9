//! JSON experiment configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::ArmModel;
use crate::policies::{PolicyKind, PolicyParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn default_alpha() -> f64 {
    2.0
}
fn default_zeta() -> f64 {
    1.2
}
fn default_c() -> f64 {
    1.0
}
fn default_init_pulls() -> usize {
    4
}
fn default_bound_c() -> f64 {
    1.5
}
fn default_n_mc() -> usize {
    100_000
}

/// One policy entry of the `policies` array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_zeta")]
    pub zeta: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_init_pulls")]
    pub init_pulls: usize,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        PolicySpec {
            kind,
            alpha: default_alpha(),
            zeta: default_zeta(),
            c: default_c(),
            init_pulls: default_init_pulls(),
        }
    }

    pub fn params(&self) -> PolicyParams {
        PolicyParams {
            alpha: self.alpha,
            zeta: self.zeta,
            c: self.c,
            init_pulls: self.init_pulls,
        }
    }
}

/// Whether policies receive the exact side-information means or estimates
/// calibrated from n pre-run draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMode {
    #[default]
    Exact,
    Calibrated {
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub horizon: u64,
    pub runs: usize,
    pub base_seed: u64,
    pub policies: Vec<PolicySpec>,
    pub arms: Vec<ArmModel>,
    #[serde(default)]
    pub omega_mode: OmegaMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Monte-Carlo sample count for non-analytic true means.
    #[serde(default = "default_n_mc")]
    pub n_mc: usize,
    /// Surrogate for the C_{T,i} factor in the theoretical bound.
    #[serde(default = "default_bound_c")]
    pub bound_c: f64,
}

impl ExperimentConfig {
    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let k = self.arms.len();
        if k < 2 {
            return Err(invalid("arms", "K >= 2 required"));
        }
        if self.runs < 1 {
            return Err(invalid("runs", "runs >= 1 required"));
        }
        if self.policies.is_empty() {
            return Err(invalid("policies", "at least one policy required"));
        }
        for (i, p) in self.policies.iter().enumerate() {
            if !(p.alpha > 1.0) {
                return Err(invalid(&format!("policies[{i}].alpha"), "alpha must exceed 1"));
            }
            if p.init_pulls < 4 {
                return Err(invalid(
                    &format!("policies[{i}].init_pulls"),
                    "init_pulls >= 4 required",
                ));
            }
            if self.horizon < (k * p.init_pulls) as u64 + 1 {
                return Err(invalid(
                    "horizon",
                    format!(
                        "horizon must be at least K*init_pulls + 1 = {}",
                        k * p.init_pulls + 1
                    ),
                ));
            }
        }
        if let OmegaMode::Calibrated { n } = self.omega_mode {
            if n < 1 {
                return Err(invalid("omega_mode.n", "calibration sample count must be >= 1"));
            }
        }
        Ok(())
    }
}

/// Parse and validate a JSON config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let cfg: ExperimentConfig = serde_json::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "horizon": 100,
        "runs": 2,
        "base_seed": 7,
        "policies": [{"kind": "ucbwsi"}],
        "arms": [
            {"type": "gaussian", "mu": 1.0, "sigma": 1.0, "omega": 0.0, "sigma_w": 1.0, "rho": 0.8},
            {"type": "gaussian", "mu": 0.0, "sigma": 1.0, "omega": 0.0, "sigma_w": 1.0, "rho": 0.8}
        ]
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.policies[0].alpha, 2.0);
        assert_eq!(cfg.policies[0].zeta, 1.2);
        assert_eq!(cfg.policies[0].c, 1.0);
        assert_eq!(cfg.policies[0].init_pulls, 4);
        assert_eq!(cfg.omega_mode, OmegaMode::Exact);
        assert_eq!(cfg.bound_c, 1.5);
    }

    #[test]
    fn single_arm_rejected() {
        let text = MINIMAL.replace(
            r#"{"type": "gaussian", "mu": 0.0, "sigma": 1.0, "omega": 0.0, "sigma_w": 1.0, "rho": 0.8}"#,
            "",
        );
        let text = text.replace("},\n        ]", "}]").replace(",\n            \n", "\n");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("K >= 2"), "{err}");
    }

    #[test]
    fn alpha_must_exceed_one() {
        let text = MINIMAL.replace(r#"{"kind": "ucbwsi"}"#, r#"{"kind": "ucbwsi", "alpha": 1.0}"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("alpha must exceed 1"), "{err}");
    }

    #[test]
    fn horizon_must_cover_initialization() {
        let text = MINIMAL.replace(r#""horizon": 100"#, r#""horizon": 8"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("K*init_pulls"), "{err}");
    }

    #[test]
    fn shipped_configs_match_default_suites() {
        use crate::env::ArmModel;
        use crate::harness::suites::{gaussian_suite, sinr_suite, VarianceSet};

        let g = parse_config(include_str!("../../configs/gaussian.json")).unwrap();
        for (arm, want) in g.arms.iter().zip(gaussian_suite(0.8)) {
            match (arm, &want) {
                (
                    ArmModel::Gaussian { mu, sigma, omega, sigma_w, rho },
                    ArmModel::Gaussian {
                        mu: m2,
                        sigma: s2,
                        omega: o2,
                        sigma_w: sw2,
                        rho: r2,
                    },
                ) => {
                    assert!((mu - m2).abs() < 1e-12);
                    assert!((sigma - s2).abs() < 1e-12);
                    assert!((omega - o2).abs() < 1e-12);
                    assert!((sigma_w - sw2).abs() < 1e-12);
                    assert_eq!(rho, r2);
                }
                _ => panic!("expected gaussian arms"),
            }
        }

        let s = parse_config(include_str!("../../configs/sinr.json")).unwrap();
        for (arm, want) in s.arms.iter().zip(sinr_suite(VarianceSet::High)) {
            match (arm, &want) {
                (ArmModel::Sinr(a), ArmModel::Sinr(b)) => {
                    assert_eq!(a.si_kind, b.si_kind);
                    assert_eq!(a.power, b.power);
                    assert_eq!(a.noise, b.noise);
                    assert_eq!(a.measured_interference, b.measured_interference);
                }
                _ => panic!("expected sinr arms"),
            }
        }
    }

    #[test]
    fn calibrated_omega_mode_round_trips() {
        let text = MINIMAL.replace(
            r#""base_seed": 7,"#,
            r#""base_seed": 7, "omega_mode": {"calibrated": {"n": 1000}},"#,
        );
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.omega_mode, OmegaMode::Calibrated { n: 1000 });
    }
}
