//! Config-driven batch experiments: JSON configs, seeded replications,
//! regret traces and CSV output, the gap-dependent regret bound, default
//! suites, and the Monte-Carlo selftest.

pub mod bound;
pub mod config;
pub mod run;
pub mod selftest;
pub mod suites;

pub use bound::{
    arm_moments, bound_params_from_arms, theoretical_regret_bound,
    theoretical_regret_bound_with_v, BoundParams,
};
pub use config::{parse_config, ConfigError, ExperimentConfig, OmegaMode, PolicySpec};
pub use run::{
    checkpoints, derive_seed, empirical_regret, run_batch, run_single, BatchResult, HarnessError,
    RegretTrace, RoundRecord, SummaryRow,
};
pub use selftest::{run_selftest, SelfCheck};
pub use suites::{gaussian_suite, gaussian_suite_with, sinr_suite, VarianceSet};
