//! Default experiment suites: 8-arm banks built from the published wireless
//! operating points (mean SNRs in dB, measured-interference means in dB, and
//! their low/high variance sets).

use crate::env::{ArmModel, DistSpec, SiKind, SinrArm};

pub const NUM_ARMS: usize = 8;

pub const SNR_MEANS_DB: [f64; NUM_ARMS] = [5.0, -1.0, 3.0, -9.0, 7.0, -2.0, 18.0, -7.0];
pub const SNR_VARS_LOW: [f64; NUM_ARMS] = [0.5, 0.5, 1.0, 0.8, 0.1, 0.3, 0.2, 0.4];
pub const SNR_VARS_HIGH: [f64; NUM_ARMS] = [2.0; NUM_ARMS];
pub const SI_MEANS_DB: [f64; NUM_ARMS] = [1.7, 0.2, -3.0, -0.9, -0.4, 1.0, -0.6, 1.0];
pub const SI_VARS_LOW: [f64; NUM_ARMS] = [0.2, 0.4, 0.3, 0.2, 0.3, 0.1, 0.4, 0.7];
pub const SI_VARS_HIGH: [f64; NUM_ARMS] = [2.0; NUM_ARMS];

/// Which published variance vector to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceSet {
    Low,
    High,
}

fn snr_vars(set: VarianceSet) -> &'static [f64; NUM_ARMS] {
    match set {
        VarianceSet::Low => &SNR_VARS_LOW,
        VarianceSet::High => &SNR_VARS_HIGH,
    }
}

fn si_vars(set: VarianceSet) -> &'static [f64; NUM_ARMS] {
    match set {
        VarianceSet::Low => &SI_VARS_LOW,
        VarianceSet::High => &SI_VARS_HIGH,
    }
}

/// Jointly Gaussian analogue of the 8-channel setup, scaled by 0.1 so the
/// gaps are comparable to the per-pull noise and exploration actually
/// matters over a 5000-round horizon. All arms share the correlation `rho`.
pub fn gaussian_suite(rho: f64) -> Vec<ArmModel> {
    gaussian_suite_with(rho, VarianceSet::High, VarianceSet::High)
}

pub fn gaussian_suite_with(rho: f64, snr_set: VarianceSet, si_set: VarianceSet) -> Vec<ArmModel> {
    let sv = snr_vars(snr_set);
    let wv = si_vars(si_set);
    (0..NUM_ARMS)
        .map(|i| ArmModel::Gaussian {
            mu: SNR_MEANS_DB[i] / 10.0,
            sigma: sv[i].sqrt(),
            omega: SI_MEANS_DB[i] / 10.0,
            sigma_w: wv[i].sqrt(),
            rho,
        })
        .collect()
}

/// SINR channel suite: fixed channel gains at the published mean SNR
/// operating points (AWGN channels), interference-limited with noise power
/// 0.5 W, measured interference as the side-information (lognormal in dB
/// with the chosen variance set), and a small unobserved lognormal
/// hidden-interference term standing in for analog-front-end impairments.
pub fn sinr_suite(si_set: VarianceSet) -> Vec<ArmModel> {
    let wv = si_vars(si_set);
    (0..NUM_ARMS)
        .map(|i| {
            ArmModel::Sinr(SinrArm {
                si_kind: SiKind::TxInterference,
                power: 1.0,
                gain: DistSpec::Constant {
                    value: 10.0f64.powf(SNR_MEANS_DB[i] / 10.0),
                },
                noise: 0.5,
                hidden_interference: DistSpec::LognormalDb {
                    mean_db: -20.0,
                    std_db: 1.0,
                },
                measured_interference: Some(DistSpec::LognormalDb {
                    mean_db: SI_MEANS_DB[i],
                    std_db: wv[i].sqrt(),
                }),
                scale_interference_by_gain: true,
            })
        })
        .collect()
}
