//! Simulation of downlink channel training, LS/LMMSE channel estimation and
//! zero-forcing / matched-filter precoding for a massive MISO FDD downlink.
//!
//! The crate is organized bottom-up:
//!
//! * [`channel_model`]: urban-micro and synthetic covariances, channel sampling
//! * [`training`]: semi-unitary pilots and noisy observations `y = Φᴴh + n`
//! * [`estimation`]: LS and LMMSE estimates, their noiseless limits and closed-form MSEs
//! * [`precoding`]: ZF and MF precoders and the effective channel `HᴴP`
//! * [`metrics`]: SINR, achievable rates with the training pre-log, MSE
//! * [`harness`]: scenario files, seeded parallel power sweeps, presets and CSV output
//!
//! Noiseless LS-based zero-forcing nulls inter-user interference exactly
//! whenever `K ≤ T_dl`, even with fewer pilots than antennas:
//!
//! ```
//! use rand::SeedableRng;
//! use zfsim_core::prelude::*;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let pilots = make_pilot_matrix(16, 6, PilotKind::DftSubset, &mut rng).unwrap();
//! let h = complex_gaussian_matrix(&mut rng, 16, 4);
//! let estimates: Vec<_> = h
//!     .column_iter()
//!     .map(|col| asymptotic_ls(&pilots, &col.into_owned()).unwrap())
//!     .collect();
//! let p = zf_precoder(&EstimatedChannelMatrix::from_estimates(&estimates).unwrap()).unwrap();
//! let g = effective_channel(&h, &p).unwrap();
//! assert!(scaled_identity_defect(&g, p.normalization()) < 1e-9 * p.normalization());
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel_model;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod precoding;
pub mod training;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::channel_model::{
        build_scaled_identity, build_umi_covariance, factorize, sample_channel, steering_vector,
        ChannelCovariance, CovarianceFactor, PathlossMode, SteeringParams, UmiModelParams,
    };
    pub use crate::error::{Error, Result};
    pub use crate::estimation::{
        asymptotic_lmmse, asymptotic_ls, estimate_lmmse, estimate_ls, genie, mse_closed_form_lmmse,
        mse_closed_form_ls, ChannelEstimate, Estimator, LmmseFilter,
    };
    pub use crate::harness::{
        figure_preset, run_power_sweep, run_trial, Metric, ScenarioConfig, SweepResult,
    };
    pub use crate::linalg::{complex_gaussian, complex_gaussian_matrix, CMatrix, CVector, C64};
    pub use crate::metrics::{mse_sample, rates, sinr_per_user, RateBreakdown};
    pub use crate::precoding::{
        effective_channel, mf_precoder, power_split, scaled_identity_defect, zf_precoder,
        EstimatedChannelMatrix, PrecoderScheme, PrecodingMatrix,
    };
    pub use crate::training::{
        effective_noise_variance, make_pilot_matrix, observe, FeedbackNoiseModel, PilotKind,
        PilotMatrix, TrainingObservation,
    };
}
