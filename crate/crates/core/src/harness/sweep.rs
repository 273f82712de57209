//! Two-level Monte-Carlo power sweeps: covariance draws, then channel draws
//! per covariance, each evaluated at every grid power.
//!
//! Randomness is split into independent streams so results do not depend on
//! scheduling:
//! * covariances of draw `c`: `(seed, COVARIANCE, c)`
//! * channels of trial `t`: `(seed, CHANNEL, t)`, shared by every power
//! * training noise of trial `t` at power `p`: `(seed, NOISE, bits(p), t)`
//!
//! Trial `t` uses covariance draw `t / n_ch`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::config::{ChannelModelConfig, ScenarioConfig};
use super::seed::{stream, TAG_CHANNEL, TAG_COVARIANCE, TAG_NOISE, TAG_PILOTS};
use crate::channel_model::{
    build_scaled_identity, build_umi_covariance, factorize, read_covariance_file, sample_channel,
    ChannelCovariance, CovarianceFactor, SteeringParams,
};
use crate::error::{Error, Result};
use crate::estimation::{estimate_with, Estimator, LmmseFilter};
use crate::linalg::{CMatrix, CVector};
use crate::metrics::{breakdown, mse_sample, prelog, sinr_per_user};
use crate::precoding::{
    effective_channel, power_split, precoder, EstimatedChannelMatrix, PrecoderScheme,
};
use crate::training::{make_pilot_matrix, observe, PilotMatrix};

/// Eigenvalues below this fraction of the largest are dropped when sampling.
pub const FACTOR_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Mse,
    SumRate,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Mse => "mse",
            Metric::SumRate => "sum_rate",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mse" => Ok(Metric::Mse),
            "sum_rate" => Ok(Metric::SumRate),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

/// Outcome of one (estimator, precoder) pair in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialEntry {
    pub estimator: Estimator,
    pub precoder: PrecoderScheme,
    /// `τ Σₖ log2(1 + SINRₖ)`; zero when the precoder does not exist.
    pub sum_rate: f64,
    /// Per-user MSE averaged over the users (a generic user's error).
    pub mse: f64,
    /// `Σₖ |hₖᴴpₖ|²`
    pub desired_power: f64,
    /// `Σ_{k≠j} |hₖᴴpⱼ|²`
    pub interference_power: f64,
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub power_db: f64,
    pub trial_index: usize,
    pub entries: Vec<TrialEntry>,
}

impl TrialOutcome {
    pub fn entry(&self, estimator: Estimator, precoder: PrecoderScheme) -> Option<&TrialEntry> {
        self.entries
            .iter()
            .find(|e| e.estimator == estimator && e.precoder == precoder)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub power_db: f64,
    pub estimator: Estimator,
    pub precoder: PrecoderScheme,
    pub metric: Metric,
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Count of trials in which the precoder could not be built.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRow {
    pub power_db: f64,
    pub estimator: Estimator,
    pub precoder: PrecoderScheme,
    pub rank_deficient: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub diagnostics: Vec<DiagnosticRow>,
}

impl SweepResult {
    pub fn get(
        &self,
        power_db: f64,
        estimator: Estimator,
        precoder: PrecoderScheme,
        metric: Metric,
    ) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.power_db == power_db
                && r.estimator == estimator
                && r.precoder == precoder
                && r.metric == metric
        })
    }

    pub fn diagnostic(
        &self,
        power_db: f64,
        estimator: Estimator,
        precoder: PrecoderScheme,
    ) -> Option<&DiagnosticRow> {
        self.diagnostics
            .iter()
            .find(|r| r.power_db == power_db && r.estimator == estimator && r.precoder == precoder)
    }
}

/// Covariances and sampling factors of every user for one covariance draw.
#[derive(Debug, Clone)]
pub struct UserStatistics {
    pub covariances: Vec<ChannelCovariance>,
    pub factors: Vec<CovarianceFactor>,
}

/// Noise levels and LMMSE filters for one grid power.
struct PowerPoint {
    power_db: f64,
    training_noise: f64,
    data_noise: f64,
    lmmse: Option<Vec<LmmseFilter>>,
}

/// A validated scenario with its fixed pilot matrix.
#[derive(Debug, Clone)]
pub struct Experiment {
    cfg: ScenarioConfig,
    pilots: PilotMatrix,
    steer: SteeringParams,
    tau: f64,
    file_covariances: Option<Vec<ChannelCovariance>>,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl Experiment {
    pub fn new(cfg: ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = stream(cfg.master_seed, &[TAG_PILOTS]);
        let pilots = make_pilot_matrix(cfg.num_antennas, cfg.num_pilots, cfg.pilot_kind, &mut rng)?;
        let steer = SteeringParams::new(cfg.num_antennas, cfg.antenna_spacing)?;
        let tau = prelog(cfg.num_pilots, cfg.coherence_length)?;
        let file_covariances = match &cfg.channel_model {
            ChannelModelConfig::File(paths) => {
                let covs = paths
                    .iter()
                    .map(|p| read_covariance_file(p))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(c) = covs.iter().find(|c| c.num_antennas() != cfg.num_antennas) {
                    return Err(Error::Validation(format!(
                        "covariance file is {0}x{0} but M = {1}",
                        c.num_antennas(),
                        cfg.num_antennas
                    )));
                }
                Some(covs)
            }
            _ => None,
        };
        Ok(Self {
            cfg,
            pilots,
            steer,
            tau,
            file_covariances,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn pilots(&self) -> &PilotMatrix {
        &self.pilots
    }

    /// Covariances of every user for covariance draw `cov_index`.
    pub fn user_statistics(&self, cov_index: usize) -> Result<UserStatistics> {
        let k = self.cfg.num_users;
        let covariances: Vec<ChannelCovariance> =
            match (&self.cfg.channel_model, &self.file_covariances) {
                (_, Some(files)) => (0..k).map(|u| files[u % files.len()].clone()).collect(),
                (ChannelModelConfig::ScaledIdentity(c), _) => {
                    let cov = build_scaled_identity(*c, self.cfg.num_antennas)?;
                    vec![cov; k]
                }
                (ChannelModelConfig::Umi(params), _) => {
                    let mut rng = stream(self.cfg.master_seed, &[TAG_COVARIANCE, cov_index as u64]);
                    (0..k)
                        .map(|_| build_umi_covariance(params, &self.steer, &mut rng))
                        .collect::<Result<_>>()?
                }
                (ChannelModelConfig::File(_), None) => {
                    unreachable!("file covariances are loaded in new()")
                }
            };
        let factors = covariances
            .iter()
            .map(|c| factorize(c, FACTOR_REL_TOL))
            .collect::<Result<_>>()?;
        Ok(UserStatistics {
            covariances,
            factors,
        })
    }

    /// Noise variance seen by the estimators at `power_db`, feedback noise included.
    pub fn training_noise_variance(&self, power_db: f64) -> Result<f64> {
        if self.cfg.noiseless_training {
            return Ok(0.0);
        }
        self.cfg.feedback_model.noise_variance(
            db_to_linear(power_db),
            self.cfg.feedback_power_db.map(db_to_linear),
        )
    }

    fn power_point(&self, stats: &UserStatistics, power_db: f64) -> Result<PowerPoint> {
        let data_noise = 1.0 / db_to_linear(power_db);
        let training_noise = self.training_noise_variance(power_db)?;
        let lmmse = if self.cfg.estimators.contains(&Estimator::Lmmse) {
            Some(
                stats
                    .covariances
                    .iter()
                    .map(|c| {
                        if training_noise > 0.0 {
                            LmmseFilter::new(&self.pilots, c, training_noise)
                        } else {
                            LmmseFilter::noiseless(&self.pilots, c)
                        }
                    })
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        Ok(PowerPoint {
            power_db,
            training_noise,
            data_noise,
            lmmse,
        })
    }

    /// True channels of trial `trial_index`, one column per user.
    pub fn draw_channels(
        &self,
        stats: &UserStatistics,
        trial_index: usize,
    ) -> Result<Vec<CVector>> {
        let mut rng = stream(self.cfg.master_seed, &[TAG_CHANNEL, trial_index as u64]);
        stats
            .factors
            .iter()
            .zip(&stats.covariances)
            .map(|(f, c)| sample_channel(f, c.mean(), &mut rng))
            .collect()
    }

    fn evaluate(
        &self,
        point: &PowerPoint,
        channels: &[CVector],
        trial_index: usize,
    ) -> Result<TrialOutcome> {
        let k = self.cfg.num_users;
        let mut rng = stream(
            self.cfg.master_seed,
            &[TAG_NOISE, point.power_db.to_bits(), trial_index as u64],
        );
        let observations = channels
            .iter()
            .map(|h| observe(&self.pilots, h, point.training_noise, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let mut h_true = CMatrix::zeros(self.cfg.num_antennas, k);
        for (u, h) in channels.iter().enumerate() {
            h_true.set_column(u, h);
        }

        let mut entries = Vec::with_capacity(self.cfg.estimators.len() * self.cfg.precoders.len());
        for &estimator in &self.cfg.estimators {
            let estimates = (0..k)
                .map(|u| {
                    let filter = point.lmmse.as_ref().map(|f| &f[u]);
                    estimate_with(
                        estimator,
                        &self.pilots,
                        &channels[u],
                        &observations[u],
                        filter,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let mse = channels
                .iter()
                .zip(&estimates)
                .map(|(h, e)| mse_sample(h, e))
                .sum::<Result<f64>>()?
                / k as f64;
            let h_hat = EstimatedChannelMatrix::from_estimates(&estimates)?;
            for &scheme in &self.cfg.precoders {
                let entry = match precoder(scheme, &h_hat) {
                    Ok(p) => {
                        let (desired_power, interference_power) =
                            power_split(&effective_channel(&h_true, &p)?);
                        let sinr = sinr_per_user(&h_true, &p, point.data_noise)?;
                        TrialEntry {
                            estimator,
                            precoder: scheme,
                            sum_rate: breakdown(sinr, self.tau).sum_rate,
                            mse,
                            desired_power,
                            interference_power,
                            rank_deficient: false,
                        }
                    }
                    Err(Error::RankDeficient { .. } | Error::ZeroMatrix) => TrialEntry {
                        estimator,
                        precoder: scheme,
                        sum_rate: 0.0,
                        mse,
                        desired_power: 0.0,
                        interference_power: 0.0,
                        rank_deficient: true,
                    },
                    Err(e) => return Err(e),
                };
                entries.push(entry);
            }
        }
        Ok(TrialOutcome {
            power_db: point.power_db,
            trial_index,
            entries,
        })
    }

    /// One trial at one power; a pure function of `(config, power_db, trial_index)`.
    pub fn run_trial(&self, power_db: f64, trial_index: usize) -> Result<TrialOutcome> {
        if trial_index >= self.cfg.num_trials() {
            return Err(Error::InvalidParameter(format!(
                "trial index {trial_index} out of range (n_cov * n_ch = {})",
                self.cfg.num_trials()
            )));
        }
        let stats = self.user_statistics(trial_index / self.cfg.n_ch)?;
        let point = self.power_point(&stats, power_db)?;
        let channels = self.draw_channels(&stats, trial_index)?;
        self.evaluate(&point, &channels, trial_index)
    }

    /// All trials of covariance draw `cov_index`, indexed `[power][channel draw]`.
    fn run_block(&self, cov_index: usize) -> Result<Vec<Vec<TrialOutcome>>> {
        let stats = self.user_statistics(cov_index)?;
        let points = self
            .cfg
            .power_grid_db
            .iter()
            .map(|&p| self.power_point(&stats, p))
            .collect::<Result<Vec<_>>>()?;
        let first = cov_index * self.cfg.n_ch;
        let per_channel = (first..first + self.cfg.n_ch)
            .into_par_iter()
            .map(|t| {
                let channels = self.draw_channels(&stats, t)?;
                points
                    .iter()
                    .map(|pt| self.evaluate(pt, &channels, t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        // transpose to [power][channel]
        let mut by_power: Vec<Vec<TrialOutcome>> = (0..points.len())
            .map(|_| Vec::with_capacity(self.cfg.n_ch))
            .collect();
        for outcomes in per_channel {
            for (p, o) in outcomes.into_iter().enumerate() {
                by_power[p].push(o);
            }
        }
        Ok(by_power)
    }

    /// Every trial of the sweep, grouped by grid power in trial-index order.
    pub fn run_all_trials(&self) -> Result<Vec<Vec<TrialOutcome>>> {
        let blocks = (0..self.cfg.n_cov)
            .into_par_iter()
            .map(|c| self.run_block(c))
            .collect::<Result<Vec<_>>>()?;
        let mut by_power: Vec<Vec<TrialOutcome>> = (0..self.cfg.power_grid_db.len())
            .map(|_| Vec::with_capacity(self.cfg.num_trials()))
            .collect();
        for block in blocks {
            for (p, outcomes) in block.into_iter().enumerate() {
                by_power[p].extend(outcomes);
            }
        }
        Ok(by_power)
    }

    pub fn run_power_sweep(&self) -> Result<SweepResult> {
        Ok(aggregate(&self.cfg, &self.run_all_trials()?))
    }
}

/// Runs one trial of `cfg`.
pub fn run_trial(cfg: &ScenarioConfig, power_db: f64, trial_index: usize) -> Result<TrialOutcome> {
    Experiment::new(cfg.clone())?.run_trial(power_db, trial_index)
}

/// Runs the whole sweep on the global rayon pool.
pub fn run_power_sweep(cfg: &ScenarioConfig) -> Result<SweepResult> {
    Experiment::new(cfg.clone())?.run_power_sweep()
}

/// Dedicated thread pool for running sweeps with a fixed worker count.
pub struct WorkerPool(rayon::ThreadPool);

impl WorkerPool {
    pub fn new(workers: usize) -> Result<Self> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map(Self)
            .map_err(|e| Error::InvalidParameter(format!("cannot build worker pool: {e}")))
    }

    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        self.0.install(f)
    }
}

/// Runs the whole sweep on a dedicated pool of `workers` threads.
pub fn run_power_sweep_with_workers(cfg: &ScenarioConfig, workers: usize) -> Result<SweepResult> {
    let experiment = Experiment::new(cfg.clone())?;
    WorkerPool::new(workers)?.install(|| experiment.run_power_sweep())
}

/// Mean and standard error of the mean, two-pass.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let var = ss / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Merges per-trial outcomes (grouped by grid power) into sorted result rows.
pub fn aggregate(cfg: &ScenarioConfig, by_power: &[Vec<TrialOutcome>]) -> SweepResult {
    type Key = (Estimator, PrecoderScheme);
    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for (outcomes, &power_db) in by_power.iter().zip(&cfg.power_grid_db) {
        let mut rates: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
        let mut mses: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
        let mut failures: BTreeMap<Key, usize> = BTreeMap::new();
        for outcome in outcomes {
            for e in &outcome.entries {
                let key = (e.estimator, e.precoder);
                rates.entry(key).or_default().push(e.sum_rate);
                mses.entry(key).or_default().push(e.mse);
                *failures.entry(key).or_default() += e.rank_deficient as usize;
            }
        }
        for (key, values) in &rates {
            for (metric, values) in [(Metric::SumRate, values), (Metric::Mse, &mses[key])] {
                let (mean, stderr) = mean_and_stderr(values);
                rows.push(SweepRow {
                    power_db,
                    estimator: key.0,
                    precoder: key.1,
                    metric,
                    mean,
                    stderr,
                    n: values.len(),
                });
            }
            diagnostics.push(DiagnosticRow {
                power_db,
                estimator: key.0,
                precoder: key.1,
                rank_deficient: failures[key],
                n: values.len(),
            });
        }
    }
    rows.sort_by(|a, b| {
        a.power_db
            .total_cmp(&b.power_db)
            .then_with(|| a.estimator.as_str().cmp(b.estimator.as_str()))
            .then_with(|| a.precoder.as_str().cmp(b.precoder.as_str()))
            .then_with(|| a.metric.as_str().cmp(b.metric.as_str()))
    });
    diagnostics.sort_by(|a, b| {
        a.power_db
            .total_cmp(&b.power_db)
            .then_with(|| a.estimator.as_str().cmp(b.estimator.as_str()))
            .then_with(|| a.precoder.as_str().cmp(b.precoder.as_str()))
    });
    SweepResult { rows, diagnostics }
}
