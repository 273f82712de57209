//! LS and LMMSE channel estimation from training observations, their
//! noiseless limits, and closed-form mean-square errors.

use std::fmt;
use std::str::FromStr;

use crate::channel_model::ChannelCovariance;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, frobenius_sq, hermitian_condition, trace_re, CMatrix, CVector};
use crate::training::{PilotMatrix, TrainingObservation};

/// Largest condition number accepted for `ΦᴴCΦ + σ²I`.
pub const LMMSE_MAX_CONDITION: f64 = 1e14;
/// Largest condition number accepted for `ΦᴴCΦ` in the noiseless LMMSE limit.
pub const PILOT_GRAM_MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    Ls,
    Lmmse,
    AsymptoticLs,
    AsymptoticLmmse,
    /// The true channel.
    Genie,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::Ls => "ls",
            Estimator::Lmmse => "lmmse",
            Estimator::AsymptoticLs => "asymptotic_ls",
            Estimator::AsymptoticLmmse => "asymptotic_lmmse",
            Estimator::Genie => "genie",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ls" => Ok(Estimator::Ls),
            "lmmse" => Ok(Estimator::Lmmse),
            "asymptotic_ls" => Ok(Estimator::AsymptoticLs),
            "asymptotic_lmmse" => Ok(Estimator::AsymptoticLmmse),
            "genie" => Ok(Estimator::Genie),
            other => Err(Error::InvalidParameter(format!(
                "unknown estimator `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    pub h_hat: CVector,
    pub estimator: Estimator,
}

fn check_obs(pilots: &PilotMatrix, obs: &TrainingObservation) -> Result<()> {
    if obs.num_pilots() != pilots.num_pilots() {
        return Err(Error::mismatch(
            "observation length",
            pilots.num_pilots(),
            obs.num_pilots(),
        ));
    }
    Ok(())
}

fn check_channel(pilots: &PilotMatrix, h: &CVector) -> Result<()> {
    if h.len() != pilots.num_antennas() {
        return Err(Error::mismatch(
            "channel length",
            pilots.num_antennas(),
            h.len(),
        ));
    }
    Ok(())
}

fn check_cov(pilots: &PilotMatrix, cov: &ChannelCovariance) -> Result<()> {
    if cov.num_antennas() != pilots.num_antennas() {
        return Err(Error::mismatch(
            "covariance size",
            pilots.num_antennas(),
            cov.num_antennas(),
        ));
    }
    Ok(())
}

/// `ĥ = Φy`. Semi-unitary pilots make this the least-squares solution.
pub fn estimate_ls(pilots: &PilotMatrix, obs: &TrainingObservation) -> Result<ChannelEstimate> {
    check_obs(pilots, obs)?;
    Ok(ChannelEstimate {
        h_hat: pilots.expand(&obs.y),
        estimator: Estimator::Ls,
    })
}

/// `ĥ = ΦΦᴴh`, the LS estimate with the training noise removed.
pub fn asymptotic_ls(pilots: &PilotMatrix, h: &CVector) -> Result<ChannelEstimate> {
    check_channel(pilots, h)?;
    Ok(ChannelEstimate {
        h_hat: pilots.expand(&pilots.compress(h)),
        estimator: Estimator::AsymptoticLs,
    })
}

pub fn genie(h: &CVector) -> ChannelEstimate {
    ChannelEstimate {
        h_hat: h.clone(),
        estimator: Estimator::Genie,
    }
}

/// Precomputed LMMSE filter `ĥ = G(y - Φᴴμ) + μ` with `G = CΦ(ΦᴴCΦ + σ²I)⁻¹`.
///
/// Building the filter once per (covariance, noise level) and applying it to
/// many observations is what the Monte-Carlo harness does; [`estimate_lmmse`]
/// and [`asymptotic_lmmse`] are one-shot wrappers.
#[derive(Debug, Clone)]
pub struct LmmseFilter {
    gain: CMatrix,
    mean: CVector,
    projected_mean: CVector,
    noise_variance: f64,
}

impl LmmseFilter {
    /// Filter for noise variance `sigma2 > 0`.
    pub fn new(pilots: &PilotMatrix, cov: &ChannelCovariance, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "LMMSE noise variance must be positive, got {sigma2}"
            )));
        }
        Self::build(pilots, cov, sigma2)
    }

    /// The `σ² → 0` limit `G = CΦ(ΦᴴCΦ)⁻¹`.
    pub fn noiseless(pilots: &PilotMatrix, cov: &ChannelCovariance) -> Result<Self> {
        Self::build(pilots, cov, 0.0)
    }

    fn build(pilots: &PilotMatrix, cov: &ChannelCovariance, sigma2: f64) -> Result<Self> {
        check_cov(pilots, cov)?;
        let phi = pilots.matrix();
        let c_phi = cov.matrix() * phi;
        let mut system = phi.ad_mul(&c_phi);
        for i in 0..system.nrows() {
            system[(i, i)].re += sigma2;
        }
        let condition = hermitian_condition(&system);
        let singular = |condition| {
            if sigma2 > 0.0 {
                Error::SingularSystem { condition }
            } else {
                Error::SingularPilotGram { condition }
            }
        };
        let limit = if sigma2 > 0.0 {
            LMMSE_MAX_CONDITION
        } else {
            PILOT_GRAM_MAX_CONDITION
        };
        if !(condition <= limit) {
            return Err(singular(condition));
        }
        let chol = cholesky(&system).ok_or_else(|| singular(condition))?;
        // A X = (CΦ)ᴴ  =>  G = Xᴴ = CΦ A⁻¹ since A is Hermitian
        let gain = chol.solve(&c_phi.adjoint()).adjoint();
        Ok(Self {
            gain,
            projected_mean: pilots.compress(cov.mean()),
            mean: cov.mean().clone(),
            noise_variance: sigma2,
        })
    }

    pub fn gain(&self) -> &CMatrix {
        &self.gain
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    fn apply_vec(&self, y: &CVector) -> CVector {
        &self.gain * (y - &self.projected_mean) + &self.mean
    }

    pub fn apply(&self, obs: &TrainingObservation) -> Result<ChannelEstimate> {
        if obs.num_pilots() != self.gain.ncols() {
            return Err(Error::mismatch(
                "observation length",
                self.gain.ncols(),
                obs.num_pilots(),
            ));
        }
        Ok(ChannelEstimate {
            h_hat: self.apply_vec(&obs.y),
            estimator: if self.noise_variance > 0.0 {
                Estimator::Lmmse
            } else {
                Estimator::AsymptoticLmmse
            },
        })
    }

    /// Applies the filter to the noiseless observation `Φᴴh`.
    pub fn apply_noiseless(&self, pilots: &PilotMatrix, h: &CVector) -> Result<ChannelEstimate> {
        check_channel(pilots, h)?;
        let obs = TrainingObservation {
            y: pilots.compress(h),
            noise_variance: 0.0,
        };
        self.apply(&obs)
    }
}

/// LMMSE estimate `CΦ(ΦᴴCΦ + σ²I)⁻¹(y - Φᴴμ) + μ`.
pub fn estimate_lmmse(
    pilots: &PilotMatrix,
    obs: &TrainingObservation,
    cov: &ChannelCovariance,
    sigma2: f64,
) -> Result<ChannelEstimate> {
    check_obs(pilots, obs)?;
    LmmseFilter::new(pilots, cov, sigma2)?.apply(obs)
}

/// Noiseless LMMSE limit `CΦ(ΦᴴCΦ)⁻¹Φᴴ(h - μ) + μ`.
pub fn asymptotic_lmmse(
    pilots: &PilotMatrix,
    h: &CVector,
    cov: &ChannelCovariance,
) -> Result<ChannelEstimate> {
    check_channel(pilots, h)?;
    LmmseFilter::noiseless(pilots, cov)?.apply_noiseless(pilots, h)
}

/// `E‖h - Φy‖² = tr(C) - tr(ΦᴴCΦ) + σ² T_dl`, plus the part of the mean outside the pilot span.
pub fn mse_closed_form_ls(
    pilots: &PilotMatrix,
    cov: &ChannelCovariance,
    sigma2: f64,
) -> Result<f64> {
    check_cov(pilots, cov)?;
    let phi = pilots.matrix();
    let projected = phi.ad_mul(&(cov.matrix() * phi));
    let mean = cov.mean();
    let mean_loss = mean.norm_squared() - pilots.compress(mean).norm_squared();
    Ok(cov.trace() - trace_re(&projected) + mean_loss + sigma2 * pilots.num_pilots() as f64)
}

/// `tr(C) - tr(CΦ(ΦᴴCΦ + σ²I)⁻¹ΦᴴC)`
pub fn mse_closed_form_lmmse(
    pilots: &PilotMatrix,
    cov: &ChannelCovariance,
    sigma2: f64,
) -> Result<f64> {
    check_cov(pilots, cov)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "LMMSE noise variance must be positive, got {sigma2}"
        )));
    }
    let phi = pilots.matrix();
    let c_phi = cov.matrix() * phi;
    let mut system = phi.ad_mul(&c_phi);
    for i in 0..system.nrows() {
        system[(i, i)].re += sigma2;
    }
    let chol = cholesky(&system).ok_or(Error::SingularSystem {
        condition: f64::INFINITY,
    })?;
    // tr(CΦ A⁻¹ ΦᴴC) = ‖L⁻¹ ΦᴴC‖_F² for A = L Lᴴ
    let mut whitened = c_phi.adjoint();
    chol.l_dirty().solve_lower_triangular_mut(&mut whitened);
    Ok(cov.trace() - frobenius_sq(&whitened))
}

/// Estimates the channel with any estimator using a prepared LMMSE filter when one is needed.
pub fn estimate_with(
    estimator: Estimator,
    pilots: &PilotMatrix,
    h: &CVector,
    obs: &TrainingObservation,
    lmmse: Option<&LmmseFilter>,
) -> Result<ChannelEstimate> {
    let need_filter = || {
        lmmse.ok_or_else(|| {
            Error::InvalidParameter(format!("{estimator} estimation needs an LMMSE filter"))
        })
    };
    match estimator {
        Estimator::Ls => estimate_ls(pilots, obs),
        Estimator::AsymptoticLs => asymptotic_ls(pilots, h),
        Estimator::Genie => Ok(genie(h)),
        Estimator::Lmmse => need_filter()?.apply(obs),
        Estimator::AsymptoticLmmse => need_filter()?.apply_noiseless(pilots, h),
    }
}
