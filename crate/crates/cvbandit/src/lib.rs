//! Bandit learning with side-information.
//!
//! The crate implements upper-confidence-bound channel selection where each
//! pull also reveals a correlated side-observation (for wireless channels,
//! the measured interference power). Control-variate estimators fold the
//! side-observation into the mean-reward estimate, shrinking its variance by
//! a factor of (1 - rho^2) and with it the exploration cost.
//!
//! Layout:
//! - [`stats`]: special functions, Student-t quantiles, seeded RNG streams,
//!   correlated Gaussian sampling.
//! - [`cv`]: control-variate estimators, the leave-one-out splitting variant
//!   for non-Gaussian data, and the multi-side-information generalization.
//! - [`policies`]: UCBwSI, UCBwSI-Split, and the UCB1-Normal and UCB-V
//!   baselines as deterministic state machines.
//! - [`env`]: jointly Gaussian, SINR-channel, and copula arm models.
//! - [`harness`]: config-driven batch runner, regret bound, CSV output.

pub mod cv;
pub mod env;
pub mod error;
pub mod harness;
pub mod policies;
pub mod stats;
