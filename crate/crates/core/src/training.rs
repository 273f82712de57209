//! Downlink pilot design and noisy training observations `y = Φᴴh + n`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{complex_gaussian, complex_gaussian_matrix, CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PilotKind {
    /// First `T_dl` columns of the unitary `M`-point DFT matrix.
    #[default]
    DftSubset,
    /// Orthonormalized i.i.d. complex Gaussian columns.
    RandomSemiUnitary,
    /// First `T_dl` canonical basis vectors.
    IdentitySubset,
}

impl PilotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PilotKind::DftSubset => "dft_subset",
            PilotKind::RandomSemiUnitary => "random_semi_unitary",
            PilotKind::IdentitySubset => "identity_subset",
        }
    }
}

impl fmt::Display for PilotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PilotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dft_subset" => Ok(PilotKind::DftSubset),
            "random_semi_unitary" => Ok(PilotKind::RandomSemiUnitary),
            "identity_subset" => Ok(PilotKind::IdentitySubset),
            other => Err(Error::InvalidParameter(format!(
                "unknown pilot kind `{other}`"
            ))),
        }
    }
}

/// `M x T_dl` pilot matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotMatrix {
    matrix: CMatrix,
    kind: PilotKind,
}

impl PilotMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> PilotKind {
        self.kind
    }

    pub fn num_antennas(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_pilots(&self) -> usize {
        self.matrix.ncols()
    }

    /// `ΦΦᴴ`, the orthogonal projector onto the pilot subspace.
    pub fn projector(&self) -> CMatrix {
        &self.matrix * self.matrix.adjoint()
    }

    /// `Φᴴ v`
    pub fn compress(&self, v: &CVector) -> CVector {
        self.matrix.ad_mul(v)
    }

    /// `Φ v`
    pub fn expand(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }
}

/// Builds an `M x T_dl` semi-unitary pilot matrix. Only the random kind draws from `rng`.
pub fn make_pilot_matrix<R: Rng + ?Sized>(
    num_antennas: usize,
    num_pilots: usize,
    kind: PilotKind,
    rng: &mut R,
) -> Result<PilotMatrix> {
    if num_antennas == 0 || num_pilots == 0 || num_pilots > num_antennas {
        return Err(Error::InvalidDimensions(format!(
            "pilot matrix needs 1 <= T_dl <= M, got M = {num_antennas}, T_dl = {num_pilots}"
        )));
    }
    let m = num_antennas;
    let matrix = match kind {
        PilotKind::DftSubset => {
            let scale = 1.0 / (m as f64).sqrt();
            CMatrix::from_fn(m, num_pilots, |row, col| {
                // reduce the index product mod M so large grids keep full phase accuracy
                let k = (row * col) % m;
                C64::from_polar(scale, -2.0 * PI * k as f64 / m as f64)
            })
        }
        PilotKind::IdentitySubset => CMatrix::identity(m, num_pilots),
        PilotKind::RandomSemiUnitary => {
            let g = complex_gaussian_matrix(rng, m, num_pilots);
            g.qr().q()
        }
    };
    Ok(PilotMatrix { matrix, kind })
}

/// Training noise variance `1/P_dl`, plus `1/P_fb` when the feedback link is noisy.
/// Powers are linear.
pub fn effective_noise_variance(p_dl: f64, p_fb: Option<f64>) -> Result<f64> {
    FeedbackNoiseModel::Additive.noise_variance(p_dl, p_fb)
}

/// How the feedback-link noise enters the observation fed back to the base station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeedbackNoiseModel {
    /// Independent term of variance `1/P_fb`: `σ² = 1/P_dl + 1/P_fb`.
    Additive,
    /// Feedback noise proportional to the training noise: `σ² = (1 + 1/P_fb) / P_dl`.
    /// The training SNR loses a constant `1 + 1/P_fb` factor but still grows with `P_dl`.
    #[default]
    Proportional,
}

impl FeedbackNoiseModel {
    pub fn as_str(self) -> &'static str {
        match self {
            FeedbackNoiseModel::Additive => "additive",
            FeedbackNoiseModel::Proportional => "proportional",
        }
    }

    pub fn noise_variance(self, p_dl: f64, p_fb: Option<f64>) -> Result<f64> {
        let check = |p: f64| {
            if p > 0.0 && !p.is_nan() {
                Ok(p)
            } else {
                Err(Error::NonPositivePower(p))
            }
        };
        let p_dl = check(p_dl)?;
        let base = 1.0 / p_dl;
        match p_fb.map(check).transpose()? {
            None => Ok(base),
            Some(p_fb) => Ok(match self {
                FeedbackNoiseModel::Additive => base + 1.0 / p_fb,
                FeedbackNoiseModel::Proportional => base * (1.0 + 1.0 / p_fb),
            }),
        }
    }
}

impl FromStr for FeedbackNoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" => Ok(FeedbackNoiseModel::Additive),
            "proportional" => Ok(FeedbackNoiseModel::Proportional),
            other => Err(Error::InvalidParameter(format!(
                "unknown feedback model `{other}`"
            ))),
        }
    }
}

/// Training observation `y` of one user together with the total noise variance it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingObservation {
    pub y: CVector,
    pub noise_variance: f64,
}

impl TrainingObservation {
    pub fn num_pilots(&self) -> usize {
        self.y.len()
    }
}

/// `y = Φᴴh + n` with `n ~ CN(0, σ² I)`. With `σ² = 0` no randomness is consumed.
pub fn observe<R: Rng + ?Sized>(
    pilots: &PilotMatrix,
    h: &CVector,
    sigma2: f64,
    rng: &mut R,
) -> Result<TrainingObservation> {
    if h.len() != pilots.num_antennas() {
        return Err(Error::mismatch(
            "observed channel",
            pilots.num_antennas(),
            h.len(),
        ));
    }
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise variance must be finite and >= 0, got {sigma2}"
        )));
    }
    let mut y = pilots.compress(h);
    if sigma2 > 0.0 {
        y += complex_gaussian(rng, pilots.num_pilots(), sigma2);
    }
    Ok(TrainingObservation {
        y,
        noise_variance: sigma2,
    })
}
