//! Closed-form versus Monte-Carlo MSE per grid power, behind `zfsim mse-oracle`.

use std::fmt::Write as _;

use crate::error::Result;
use crate::estimation::{mse_closed_form_lmmse, mse_closed_form_ls, Estimator};

use super::config::ScenarioConfig;
use super::sweep::{mean_and_stderr, Experiment};

#[derive(Debug, Clone, PartialEq)]
pub struct MseOracleRow {
    pub power_db: f64,
    pub estimator: Estimator,
    /// Closed form averaged over covariance draws and users; NaN when undefined
    /// (LMMSE with noiseless training).
    pub closed_form: f64,
    pub monte_carlo: f64,
    pub stderr: f64,
    pub n: usize,
}

impl MseOracleRow {
    /// `(monte_carlo - closed_form) / closed_form`
    pub fn relative_gap(&self) -> f64 {
        (self.monte_carlo - self.closed_form) / self.closed_form
    }
}

/// One row per (power, estimator) of `cfg`; Genie rows have closed form 0.
pub fn mse_oracle_table(cfg: &ScenarioConfig) -> Result<Vec<MseOracleRow>> {
    let exp = Experiment::new(cfg.clone())?;
    let stats = (0..cfg.n_cov)
        .map(|c| exp.user_statistics(c))
        .collect::<Result<Vec<_>>>()?;
    let by_power = exp.run_all_trials()?;
    let mut rows = Vec::new();
    for (outcomes, &power_db) in by_power.iter().zip(&cfg.power_grid_db) {
        let sigma2 = exp.training_noise_variance(power_db)?;
        for &estimator in &cfg.estimators {
            let closed_form = match estimator {
                Estimator::Genie => 0.0,
                Estimator::Lmmse if sigma2 == 0.0 => f64::NAN,
                _ => {
                    let mut total = 0.0;
                    let mut count = 0usize;
                    for s in &stats {
                        for cov in &s.covariances {
                            total += match estimator {
                                Estimator::Lmmse => {
                                    mse_closed_form_lmmse(exp.pilots(), cov, sigma2)?
                                }
                                _ => mse_closed_form_ls(exp.pilots(), cov, sigma2)?,
                            };
                            count += 1;
                        }
                    }
                    total / count as f64
                }
            };
            let samples: Vec<f64> = outcomes
                .iter()
                .filter_map(|o| o.entries.iter().find(|e| e.estimator == estimator))
                .map(|e| e.mse)
                .collect();
            let (monte_carlo, stderr) = mean_and_stderr(&samples);
            rows.push(MseOracleRow {
                power_db,
                estimator,
                closed_form,
                monte_carlo,
                stderr,
                n: samples.len(),
            });
        }
    }
    Ok(rows)
}

pub fn format_oracle_table(rows: &[MseOracleRow]) -> String {
    let mut out = format!(
        "{:>9} {:>9} {:>14} {:>14} {:>12} {:>9}\n",
        "power_db", "estimator", "closed_form", "monte_carlo", "stderr", "rel_gap"
    );
    for r in rows {
        let gap = if r.closed_form > 0.0 {
            format!("{:+.3}%", 100.0 * r.relative_gap())
        } else {
            "-".to_string()
        };
        let _ = writeln!(
            out,
            "{:>9} {:>9} {:>14.6e} {:>14.6e} {:>12.3e} {:>9}",
            r.power_db,
            r.estimator.as_str(),
            r.closed_form,
            r.monte_carlo,
            r.stderr,
            gap
        );
    }
    out
}
