//! Scenarios mirroring the evaluation figures: MSE and sum-rate curves for
//! `M = 32, K = 5` with `T_dl = 32` (fig1, fig2) and `T_dl = 16` (fig3, fig4),
//! pilot-length sweeps for LMMSE-ZF (fig5) and LS-ZF (fig6), noisy feedback
//! (fig7) and the larger urban-micro cell (fig8).
//!
//! All presets use synthetic urban-micro covariances, so curves match the
//! figures in shape rather than point by point.

use super::config::{
    ChannelModelConfig, ScenarioConfig, DEFAULT_CELL_RADIUS_M, DEFAULT_PATHLOSS_EXPONENT,
};
use crate::channel_model::{PathlossMode, UmiModelParams};
use crate::error::{Error, Result};
use crate::estimation::Estimator;
use crate::precoding::PrecoderScheme;

pub const PRESET_NAMES: [&str; 8] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8",
];

/// Covariance and channel draws used by `--quick`.
pub const QUICK_N_COV: usize = 20;
pub const QUICK_N_CH: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: String,
    /// One scenario per curve family; pilot-length sweeps carry several.
    pub scenarios: Vec<ScenarioConfig>,
}

impl FigurePreset {
    /// First (for most presets the only) scenario.
    pub fn config(&self) -> &ScenarioConfig {
        &self.scenarios[0]
    }

    pub fn quick(mut self) -> Self {
        for s in &mut self.scenarios {
            s.n_cov = QUICK_N_COV;
            s.n_ch = QUICK_N_CH;
        }
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        for s in &mut self.scenarios {
            s.master_seed = seed;
        }
        self
    }
}

fn base(
    num_pilots: usize,
    estimators: &[Estimator],
    precoders: &[PrecoderScheme],
) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(32, 5, num_pilots);
    cfg.estimators = estimators.to_vec();
    cfg.precoders = precoders.to_vec();
    cfg
}

pub fn figure_preset(name: &str) -> Result<FigurePreset> {
    use Estimator::{Genie, Lmmse, Ls};
    use PrecoderScheme::{Mf, Zf};
    let all_est = [Ls, Lmmse, Genie];
    let scenarios = match name {
        "fig1" => vec![base(32, &[Ls, Lmmse], &[Zf])],
        "fig2" => vec![base(32, &all_est, &[Zf, Mf])],
        "fig3" => vec![base(16, &[Ls, Lmmse], &[Zf])],
        "fig4" => vec![base(16, &all_est, &[Zf, Mf])],
        "fig5" => [32, 31, 16, 8, 3]
            .iter()
            .map(|&t| base(t, &[Lmmse], &[Zf]))
            .collect(),
        "fig6" => [32, 31, 16, 8, 3]
            .iter()
            .map(|&t| base(t, &[Ls], &[Zf]))
            .collect(),
        "fig7" => [32, 16]
            .iter()
            .map(|&t| {
                let mut cfg = base(t, &[Ls, Lmmse], &[Zf]);
                cfg.feedback_power_db = Some(10.0);
                cfg
            })
            .collect(),
        "fig8" => {
            let mut cfg = ScenarioConfig::new(64, 10, 32);
            cfg.channel_model = ChannelModelConfig::Umi(UmiModelParams {
                pathloss_mode: PathlossMode::DistanceBased {
                    exponent: DEFAULT_PATHLOSS_EXPONENT,
                    cell_radius_m: DEFAULT_CELL_RADIUS_M,
                },
                ..Default::default()
            });
            vec![cfg]
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(FigurePreset {
        name: name.to_string(),
        scenarios,
    })
}
