//! Channel covariance construction and Gaussian channel sampling.
//!
//! Covariances come either from the urban-micro multipath model
//! `C = η Σₙ (ζₙ / N_rays) Σₘ a(θₙₘ) a(θₙₘ)ᴴ` over a uniform linear array,
//! from a scaled identity, or from a matrix file (see [`parse_covariance`]).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::linalg::{
    complex_gaussian, hermitian_defect, hermitian_eigen, hermitian_eigenvalues, hermitize, max_abs,
    trace_re, CMatrix, CVector, C64,
};

/// Relative Hermitian tolerance accepted by [`ChannelCovariance::new`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues down to `-PSD_TOL * λ_max` are treated as round-off.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringParams {
    pub num_antennas: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
}

impl SteeringParams {
    pub fn new(num_antennas: usize, spacing: f64) -> Result<Self> {
        if num_antennas == 0 {
            return Err(Error::InvalidDimensions(
                "array needs at least one antenna".into(),
            ));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "antenna spacing must be positive, got {spacing}"
            )));
        }
        Ok(Self {
            num_antennas,
            spacing,
        })
    }

    /// Half-wavelength ULA.
    pub fn half_wavelength(num_antennas: usize) -> Result<Self> {
        Self::new(num_antennas, 0.5)
    }
}

/// ULA response toward azimuth `theta`: entry `m` is `exp(i 2π d m sin θ)`.
pub fn steering_vector(theta: f64, params: &SteeringParams) -> CVector {
    let phase_step = 2.0 * PI * params.spacing * theta.sin();
    CVector::from_fn(params.num_antennas, |m, _| {
        C64::from_polar(1.0, phase_step * m as f64)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathlossMode {
    /// Scale every covariance to `trace(C) = M`.
    UnitTrace,
    /// Users dropped uniformly in a disc around the base station; the
    /// unit-trace covariance is scaled by `(d / cell_radius_m)^(-exponent)`.
    DistanceBased { exponent: f64, cell_radius_m: f64 },
}

/// Closest allowed user distance in the distance-based drop, meters.
pub const MIN_USER_DISTANCE_M: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct UmiModelParams {
    pub num_paths: usize,
    pub num_rays: usize,
    /// `ζₙ ∝ exp(-n · decay)` before normalization.
    pub cluster_power_decay: f64,
    /// Standard deviation of ray offsets around a cluster center, radians.
    pub per_cluster_angle_spread: f64,
    /// Cluster centers are drawn uniformly from this interval (radians).
    pub azimuth_range: (f64, f64),
    pub pathloss_mode: PathlossMode,
}

impl Default for UmiModelParams {
    fn default() -> Self {
        Self {
            num_paths: 6,
            num_rays: 20,
            cluster_power_decay: 0.5,
            per_cluster_angle_spread: 2f64.to_radians(),
            azimuth_range: (-FRAC_PI_2, FRAC_PI_2),
            pathloss_mode: PathlossMode::UnitTrace,
        }
    }
}

impl UmiModelParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.num_paths == 0 || self.num_rays == 0 {
            return bad("urban-micro model needs at least one path and one ray".into());
        }
        if !(self.cluster_power_decay >= 0.0 && self.cluster_power_decay.is_finite()) {
            return bad(format!(
                "cluster power decay must be >= 0, got {}",
                self.cluster_power_decay
            ));
        }
        if !(self.per_cluster_angle_spread > 0.0 && self.per_cluster_angle_spread.is_finite()) {
            return bad(format!(
                "per-cluster angle spread must be > 0, got {}",
                self.per_cluster_angle_spread
            ));
        }
        let (lo, hi) = self.azimuth_range;
        let eps = 1e-12;
        if !(lo <= hi && lo >= -FRAC_PI_2 - eps && hi <= FRAC_PI_2 + eps) {
            return bad(format!(
                "azimuth range [{lo}, {hi}] must be an interval inside [-pi/2, pi/2]"
            ));
        }
        if let PathlossMode::DistanceBased {
            exponent,
            cell_radius_m,
        } = self.pathloss_mode
        {
            if !(exponent >= 0.0 && exponent.is_finite()) {
                return bad(format!("pathloss exponent must be >= 0, got {exponent}"));
            }
            if !(cell_radius_m > MIN_USER_DISTANCE_M && cell_radius_m.is_finite()) {
                return bad(format!(
                    "cell radius must exceed {MIN_USER_DISTANCE_M} m, got {cell_radius_m}"
                ));
            }
        }
        Ok(())
    }

    /// Normalized cluster powers `ζₙ`, summing to one.
    pub fn cluster_powers(&self) -> Vec<f64> {
        let raw: Vec<f64> = (0..self.num_paths)
            .map(|n| (-(n as f64) * self.cluster_power_decay).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|p| p / total).collect()
    }
}

/// Channel second-order statistics: covariance `C` and mean `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCovariance {
    matrix: CMatrix,
    mean: CVector,
}

impl ChannelCovariance {
    /// Zero-mean covariance. The matrix must be square, Hermitian and PSD up to round-off.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let m = matrix.nrows();
        Self::with_mean(matrix, CVector::zeros(m))
    }

    pub fn with_mean(matrix: CMatrix, mean: CVector) -> Result<Self> {
        let m = matrix.nrows();
        if m == 0 {
            return Err(Error::InvalidDimensions("empty covariance matrix".into()));
        }
        if matrix.ncols() != m {
            return Err(Error::mismatch("covariance columns", m, matrix.ncols()));
        }
        if mean.len() != m {
            return Err(Error::mismatch("covariance mean", m, mean.len()));
        }
        if matrix
            .iter()
            .chain(mean.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "covariance has non-finite entries".into(),
            ));
        }
        let defect = hermitian_defect(&matrix);
        if defect > HERMITIAN_TOL * max_abs(&matrix).max(f64::MIN_POSITIVE) {
            return Err(Error::NonHermitian { defect });
        }
        let matrix = hermitize(&matrix);
        check_psd(&hermitian_eigenvalues(&matrix))?;
        Ok(Self { matrix, mean })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn mean(&self) -> &CVector {
        &self.mean
    }

    pub fn num_antennas(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.matrix)
    }

    pub fn into_parts(self) -> (CMatrix, CVector) {
        (self.matrix, self.mean)
    }
}

fn check_psd(eigenvalues_desc: &[f64]) -> Result<()> {
    let max = eigenvalues_desc.first().copied().unwrap_or(0.0);
    let min = eigenvalues_desc.last().copied().unwrap_or(0.0);
    if min < -PSD_TOL * max.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
            max_eigenvalue: max,
        });
    }
    Ok(())
}

/// Draws one urban-micro covariance: cluster centers uniform over the azimuth
/// range, ray angles Gaussian around each center, exponential cluster powers.
pub fn build_umi_covariance<R: Rng + ?Sized>(
    params: &UmiModelParams,
    steer: &SteeringParams,
    rng: &mut R,
) -> Result<ChannelCovariance> {
    params.validate()?;
    let (lo, hi) = params.azimuth_range;
    let offsets = Normal::new(0.0, params.per_cluster_angle_spread)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let powers = params.cluster_powers();

    let mut angles = Vec::with_capacity(params.num_paths);
    for _ in 0..params.num_paths {
        let center = if hi > lo { rng.gen_range(lo..hi) } else { lo };
        let rays: Vec<f64> = (0..params.num_rays)
            .map(|_| center + offsets.sample(rng))
            .collect();
        angles.push(rays);
    }

    let eta = match params.pathloss_mode {
        PathlossMode::UnitTrace => 1.0,
        PathlossMode::DistanceBased {
            exponent,
            cell_radius_m,
        } => {
            let d_min2 = MIN_USER_DISTANCE_M * MIN_USER_DISTANCE_M;
            let u: f64 = rng.gen();
            let d = (d_min2 + u * (cell_radius_m * cell_radius_m - d_min2)).sqrt();
            (d / cell_radius_m).powf(-exponent)
        }
    };

    let matrix = clustered_covariance(&angles, &powers, steer).scale(eta);
    Ok(ChannelCovariance {
        matrix: hermitize(&matrix),
        mean: CVector::zeros(steer.num_antennas),
    })
}

/// `Σₙ (ζₙ / Nₙ) Σₘ a(θₙₘ) a(θₙₘ)ᴴ` for explicit ray angles. With unit-modulus
/// steering entries the trace is `M · Σ ζₙ`.
pub fn clustered_covariance(
    ray_angles: &[Vec<f64>],
    cluster_powers: &[f64],
    steer: &SteeringParams,
) -> CMatrix {
    let m = steer.num_antennas;
    let mut acc = CMatrix::zeros(m, m);
    for (rays, &zeta) in ray_angles.iter().zip(cluster_powers) {
        if rays.is_empty() {
            continue;
        }
        let w = zeta / rays.len() as f64;
        for &theta in rays {
            let a = steering_vector(theta, steer);
            acc.gerc(C64::new(w, 0.0), &a, &a, C64::new(1.0, 0.0));
        }
    }
    acc
}

/// `c · I_M`, zero mean.
pub fn build_scaled_identity(c: f64, m: usize) -> Result<ChannelCovariance> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "identity scale must be positive, got {c}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidDimensions(
            "identity covariance needs M >= 1".into(),
        ));
    }
    Ok(ChannelCovariance {
        matrix: CMatrix::identity(m, m).scale(c),
        mean: CVector::zeros(m),
    })
}

/// Square-root factor `L` with `L Lᴴ = C`, keeping only the numerically nonzero eigenmodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceFactor {
    factor: CMatrix,
}

impl CovarianceFactor {
    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    pub fn rank(&self) -> usize {
        self.factor.ncols()
    }

    pub fn num_antennas(&self) -> usize {
        self.factor.nrows()
    }

    /// `L Lᴴ`
    pub fn reconstruct(&self) -> CMatrix {
        &self.factor * self.factor.adjoint()
    }
}

/// Eigen-based factorization, retaining eigenvalues `λ > rel_tol · λ_max`.
pub fn factorize(cov: &ChannelCovariance, rel_tol: f64) -> Result<CovarianceFactor> {
    let c = &cov.matrix;
    let defect = hermitian_defect(c);
    if defect > HERMITIAN_TOL * max_abs(c).max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitian { defect });
    }
    let (values, vectors) = hermitian_eigen(c);
    check_psd(values.as_slice())?;
    let lambda_max = values.get(0).copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..values.len())
        .filter(|&i| lambda_max > 0.0 && values[i] > rel_tol * lambda_max)
        .collect();
    let mut factor = CMatrix::zeros(c.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        let s = values[src].max(0.0).sqrt();
        factor.set_column(dst, &vectors.column(src).scale(s));
    }
    Ok(CovarianceFactor { factor })
}

/// `h = μ + L g`, `g ~ CN(0, I_r)`.
pub fn sample_channel<R: Rng + ?Sized>(
    factor: &CovarianceFactor,
    mean: &CVector,
    rng: &mut R,
) -> Result<CVector> {
    if mean.len() != factor.num_antennas() {
        return Err(Error::mismatch(
            "channel mean",
            factor.num_antennas(),
            mean.len(),
        ));
    }
    let g = complex_gaussian(rng, factor.rank(), 1.0);
    Ok(mean + &factor.factor * g)
}

/// Parses a dense complex matrix: one row per line, whitespace-separated
/// `re+imi` entries (`1.5-2e-3i`, `-0.25+0i`). Blank lines and `#` comments
/// are skipped.
pub fn parse_complex_matrix(text: &str) -> Result<CMatrix> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                parse_complex(tok).ok_or_else(|| Error::Parse {
                    path: None,
                    line: idx + 1,
                    message: format!("malformed complex entry `{tok}` (expected re+imi)"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    path: None,
                    line: idx + 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    Ok(CMatrix::from_fn(n, cols, |i, j| rows[i][j]))
}

fn parse_complex(tok: &str) -> Option<C64> {
    let body = tok.strip_suffix('i')?;
    let bytes = body.as_bytes();
    // split at the last sign that is neither leading nor an exponent sign
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    Some(C64::new(re, im))
}

/// Inverse of [`parse_complex_matrix`], lossless for finite values.
pub fn format_complex_matrix(m: &CMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(' ');
            }
            let z = m[(i, j)];
            let _ = write!(
                out,
                "{:e}{}{:e}i",
                z.re,
                if z.im.is_sign_negative() { "" } else { "+" },
                z.im
            );
        }
        out.push('\n');
    }
    out
}

/// Reads a covariance file in the [`parse_complex_matrix`] format.
pub fn read_covariance_file(path: &Path) -> Result<ChannelCovariance> {
    let text = std::fs::read_to_string(path)?;
    let matrix = parse_complex_matrix(&text).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse {
            path: Some(path.to_path_buf()),
            line,
            message,
        },
        other => other,
    })?;
    ChannelCovariance::new(matrix)
}
