//! Per-user SINR, achievable rates with the training pre-log, and estimation error.

use crate::error::{Error, Result};
use crate::estimation::ChannelEstimate;
use crate::linalg::{CMatrix, CVector};
use crate::precoding::{effective_channel, PrecodingMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct RateBreakdown {
    pub per_user_sinr: Vec<f64>,
    /// Bits per channel use, pre-log included.
    pub per_user_rate: Vec<f64>,
    pub sum_rate: f64,
    pub prelog: f64,
}

/// `|hₖᴴpₖ|² / (Σ_{j≠k} |hₖᴴpⱼ|² + σ²)` for every user.
pub fn sinr_per_user(h: &CMatrix, p: &PrecodingMatrix, sigma2_data: f64) -> Result<Vec<f64>> {
    if !(sigma2_data > 0.0 && sigma2_data.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "data noise variance must be positive, got {sigma2_data}"
        )));
    }
    let g = effective_channel(h, p)?;
    Ok((0..g.nrows())
        .map(|k| {
            let row = g.row(k);
            let desired = row[k].norm_sqr();
            let interference: f64 = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, z)| z.norm_sqr())
                .sum();
            desired / (interference + sigma2_data)
        })
        .collect())
}

/// `τ = 1 - T_dl / T_coh`
pub fn prelog(t_dl: usize, t_coh: usize) -> Result<f64> {
    if t_dl >= t_coh {
        return Err(Error::InvalidPrelog { t_dl, t_coh });
    }
    Ok(1.0 - t_dl as f64 / t_coh as f64)
}

/// Rates of one channel realization. The expectation over realizations is
/// taken by the Monte-Carlo harness.
pub fn rates(
    h: &CMatrix,
    p: &PrecodingMatrix,
    sigma2_data: f64,
    t_dl: usize,
    t_coh: usize,
) -> Result<RateBreakdown> {
    let tau = prelog(t_dl, t_coh)?;
    let per_user_sinr = sinr_per_user(h, p, sigma2_data)?;
    Ok(breakdown(per_user_sinr, tau))
}

pub(crate) fn breakdown(per_user_sinr: Vec<f64>, tau: f64) -> RateBreakdown {
    let per_user_rate: Vec<f64> = per_user_sinr
        .iter()
        .map(|s| tau * s.ln_1p() / std::f64::consts::LN_2)
        .collect();
    let sum_rate = per_user_rate.iter().sum();
    RateBreakdown {
        per_user_sinr,
        per_user_rate,
        sum_rate,
        prelog: tau,
    }
}

/// `‖h - ĥ‖²`
pub fn mse_sample(h: &CVector, h_hat: &ChannelEstimate) -> Result<f64> {
    if h.len() != h_hat.h_hat.len() {
        return Err(Error::mismatch(
            "estimate length",
            h.len(),
            h_hat.h_hat.len(),
        ));
    }
    Ok((h - &h_hat.h_hat).norm_squared())
}
