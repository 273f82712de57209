//! Independent reference implementations used as test oracles.
//!
//! These deliberately avoid the library's factorizations: explicit inverses,
//! direct sums and entrywise loops.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zfsim_core::prelude::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `exp(i 2π d m sin θ)` entry by entry.
pub fn steering(theta: f64, m: usize, spacing: f64) -> CVector {
    CVector::from_iterator(
        m,
        (0..m).map(|k| {
            let phase = 2.0 * PI * spacing * k as f64 * theta.sin();
            c(phase.cos(), phase.sin())
        }),
    )
}

/// First `t` columns of the unitary `m`-point DFT, `F[r, c] = exp(-i 2π r c / m) / √m`.
pub fn dft_columns(m: usize, t: usize) -> CMatrix {
    CMatrix::from_fn(m, t, |r, col| {
        let phase = -2.0 * PI * (r * col) as f64 / m as f64;
        c(phase.cos(), phase.sin()) / (m as f64).sqrt()
    })
}

/// `CΦ(ΦᴴCΦ + σ²I)⁻¹` through an explicit inverse.
pub fn lmmse_gain(phi: &CMatrix, cov: &CMatrix, sigma2: f64) -> CMatrix {
    let t = phi.ncols();
    let a = phi.adjoint() * cov * phi + CMatrix::identity(t, t) * c(sigma2, 0.0);
    cov * phi * a.try_inverse().expect("invertible LMMSE system")
}

/// `tr(C - G ΦᴴC)` for the LMMSE gain `G`.
pub fn lmmse_mse(phi: &CMatrix, cov: &CMatrix, sigma2: f64) -> f64 {
    let g = lmmse_gain(phi, cov, sigma2);
    (cov - g * phi.adjoint() * cov).trace().re
}

/// `E‖h - ΦΦᴴ(h) - Φn‖² = tr((I - ΦΦᴴ) C) + σ² T` for zero-mean `h`.
pub fn ls_mse(phi: &CMatrix, cov: &CMatrix, sigma2: f64) -> f64 {
    let m = phi.nrows();
    let residual = CMatrix::identity(m, m) - phi * phi.adjoint();
    (residual * cov).trace().re + sigma2 * phi.ncols() as f64
}

/// `(δ Ĥ(ĤᴴĤ)⁻¹, δ)` with `δ = 1/√tr((ĤᴴĤ)⁻¹)`.
pub fn zf(h_hat: &CMatrix) -> (CMatrix, f64) {
    let gram_inv = (h_hat.adjoint() * h_hat)
        .try_inverse()
        .expect("invertible Gram");
    let delta = 1.0 / gram_inv.trace().re.sqrt();
    (h_hat * gram_inv * c(delta, 0.0), delta)
}

/// Per-user SINR by explicit sums over `|hₖᴴpⱼ|²`.
pub fn sinr(h: &CMatrix, p: &CMatrix, sigma2: f64) -> Vec<f64> {
    let k = h.ncols();
    (0..k)
        .map(|u| {
            let gain = |j: usize| h.column(u).dotc(&p.column(j)).norm_sqr();
            let interference: f64 = (0..k).filter(|&j| j != u).map(gain).sum();
            gain(u) / (interference + sigma2)
        })
        .collect()
}

/// Random full-rank PSD covariance with trace `m`.
pub fn wishart(rng: &mut ChaCha8Rng, m: usize, rank: usize) -> CMatrix {
    let a = complex_gaussian_matrix(rng, m, rank);
    let cov = &a * a.adjoint();
    let tr = cov.trace().re;
    cov * c(m as f64 / tr, 0.0)
}

pub fn column(m: &CMatrix, j: usize) -> CVector {
    m.column(j).into_owned()
}
