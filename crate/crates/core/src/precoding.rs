//! Zero-forcing and matched-filter precoders built from estimated channels.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimation::ChannelEstimate;
use crate::linalg::{frobenius_sq, CMatrix, C64};

/// Gram matrices `ĤᴴĤ` with a larger condition number are treated as singular.
pub const ZF_MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrecoderScheme {
    Mf,
    Zf,
}

impl PrecoderScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            PrecoderScheme::Mf => "mf",
            PrecoderScheme::Zf => "zf",
        }
    }
}

impl fmt::Display for PrecoderScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PrecoderScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zf" => Ok(PrecoderScheme::Zf),
            "mf" => Ok(PrecoderScheme::Mf),
            other => Err(Error::InvalidParameter(format!(
                "unknown precoder `{other}`"
            ))),
        }
    }
}

/// `Ĥ = [ĥ₁, …, ĥ_K]`, one estimated channel per column.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedChannelMatrix {
    matrix: CMatrix,
}

impl EstimatedChannelMatrix {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.ncols() == 0 || matrix.nrows() == 0 {
            return Err(Error::InvalidDimensions(
                "estimated channel matrix needs at least one user and one antenna".into(),
            ));
        }
        Ok(Self { matrix })
    }

    pub fn from_estimates(estimates: &[ChannelEstimate]) -> Result<Self> {
        let first = estimates.first().ok_or_else(|| {
            Error::InvalidDimensions("estimated channel matrix needs at least one user".into())
        })?;
        let m = first.h_hat.len();
        let mut matrix = CMatrix::zeros(m, estimates.len());
        for (k, est) in estimates.iter().enumerate() {
            if est.h_hat.len() != m {
                return Err(Error::mismatch("estimate length", m, est.h_hat.len()));
            }
            matrix.set_column(k, &est.h_hat);
        }
        Self::from_matrix(matrix)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn num_antennas(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_users(&self) -> usize {
        self.matrix.ncols()
    }
}

/// `M x K` precoder with `tr(PPᴴ) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecodingMatrix {
    matrix: CMatrix,
    normalization: f64,
    scheme: PrecoderScheme,
}

impl PrecodingMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `δ` for ZF, `δ′` for MF.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn scheme(&self) -> PrecoderScheme {
        self.scheme
    }

    pub fn num_users(&self) -> usize {
        self.matrix.ncols()
    }

    /// Wraps an arbitrary matrix; used for hand-built precoders in tests and metrics.
    pub fn from_raw(matrix: CMatrix, normalization: f64, scheme: PrecoderScheme) -> Self {
        Self {
            matrix,
            normalization,
            scheme,
        }
    }
}

/// `P = δ Ĥ(ĤᴴĤ)⁻¹` with `δ = 1/√tr((ĤᴴĤ)⁻¹)`.
///
/// Computed from the thin QR factorization `Ĥ = QR` as `P = δ Q R⁻ᴴ`, which is
/// the same Hermitian factorization of the Gram matrix (`ĤᴴĤ = RᴴR`) without
/// ever forming `ĤᴴĤ`, so the nulling error scales with `cond(Ĥ)` instead of
/// `cond(Ĥ)²`.
pub fn zf_precoder(h_hat: &EstimatedChannelMatrix) -> Result<PrecodingMatrix> {
    let (m, k) = (h_hat.num_antennas(), h_hat.num_users());
    if k > m {
        return Err(Error::RankDeficient {
            condition: f64::INFINITY,
        });
    }
    let qr = h_hat.matrix.clone().qr();
    let r = qr.r();
    let sv = r.singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
        (hi.max(s), lo.min(s))
    });
    let condition = if smin > 0.0 {
        (smax / smin).powi(2)
    } else {
        f64::INFINITY
    };
    if !(condition <= ZF_MAX_CONDITION) {
        return Err(Error::RankDeficient { condition });
    }
    // X = R⁻ᴴ  (Rᴴ is lower triangular)
    let mut x = CMatrix::identity(k, k);
    if !r.adjoint().solve_lower_triangular_mut(&mut x) {
        return Err(Error::RankDeficient {
            condition: f64::INFINITY,
        });
    }
    let unnormalized = qr.q() * x;
    let power = frobenius_sq(&unnormalized);
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::RankDeficient { condition });
    }
    let delta = 1.0 / power.sqrt();
    Ok(PrecodingMatrix {
        matrix: unnormalized.scale(delta),
        normalization: delta,
        scheme: PrecoderScheme::Zf,
    })
}

/// `P = δ′Ĥ` with `δ′ = 1/√tr(ĤᴴĤ)`.
pub fn mf_precoder(h_hat: &EstimatedChannelMatrix) -> Result<PrecodingMatrix> {
    let energy = frobenius_sq(&h_hat.matrix);
    if !(energy > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    let delta = 1.0 / energy.sqrt();
    Ok(PrecodingMatrix {
        matrix: h_hat.matrix.scale(delta),
        normalization: delta,
        scheme: PrecoderScheme::Mf,
    })
}

pub fn precoder(scheme: PrecoderScheme, h_hat: &EstimatedChannelMatrix) -> Result<PrecodingMatrix> {
    match scheme {
        PrecoderScheme::Zf => zf_precoder(h_hat),
        PrecoderScheme::Mf => mf_precoder(h_hat),
    }
}

/// `HᴴP`; entry `(k, j)` is the gain `hₖᴴpⱼ` of user `j`'s stream at user `k`.
pub fn effective_channel(h_true: &CMatrix, p: &PrecodingMatrix) -> Result<CMatrix> {
    if h_true.nrows() != p.matrix.nrows() {
        return Err(Error::mismatch(
            "effective channel antennas",
            p.matrix.nrows(),
            h_true.nrows(),
        ));
    }
    if h_true.ncols() != p.matrix.ncols() {
        return Err(Error::mismatch(
            "effective channel users",
            p.matrix.ncols(),
            h_true.ncols(),
        ));
    }
    Ok(h_true.ad_mul(&p.matrix))
}

/// Total desired and interference power of an effective channel:
/// `(Σₖ |Gₖₖ|², Σ_{k≠j} |Gₖⱼ|²)`.
pub fn power_split(effective: &CMatrix) -> (f64, f64) {
    let mut desired = 0.0;
    let mut interference = 0.0;
    for k in 0..effective.nrows() {
        for j in 0..effective.ncols() {
            let p = effective[(k, j)].norm_sqr();
            if k == j {
                desired += p;
            } else {
                interference += p;
            }
        }
    }
    (desired, interference)
}

/// `‖G - δI‖_max`
pub fn scaled_identity_defect(effective: &CMatrix, delta: f64) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..effective.nrows() {
        for j in 0..effective.ncols() {
            let target = if k == j {
                C64::new(delta, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            worst = worst.max((effective[(k, j)] - target).norm());
        }
    }
    worst
}
