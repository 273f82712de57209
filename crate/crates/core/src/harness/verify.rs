//! Analytic-identity suite behind `zfsim verify`.
//!
//! Every check is seeded and self-contained; a failing check reports the
//! worst observed value next to its threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel_model::{
    build_scaled_identity, build_umi_covariance, factorize, sample_channel, ChannelCovariance,
    SteeringParams, UmiModelParams,
};
use crate::error::Result;
use crate::estimation::{
    asymptotic_lmmse, asymptotic_ls, estimate_lmmse, estimate_ls, genie, mse_closed_form_lmmse,
    mse_closed_form_ls, ChannelEstimate,
};
use crate::linalg::{complex_gaussian_matrix, hermitian_condition, max_abs, CMatrix, CVector, C64};
use crate::metrics::mse_sample;
use crate::precoding::{
    effective_channel, mf_precoder, power_split, scaled_identity_defect, zf_precoder,
    EstimatedChannelMatrix,
};
use crate::training::{make_pilot_matrix, observe, PilotKind, PilotMatrix};

use super::seed::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

const DRAWS: usize = 100;
const M: usize = 32;
const K: usize = 5;

/// Urban-micro covariances for `k` users and one channel realization per user.
pub fn umi_draw<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    k: usize,
) -> Result<(Vec<ChannelCovariance>, CMatrix)> {
    let steer = SteeringParams::half_wavelength(m)?;
    let params = UmiModelParams::default();
    let covs = (0..k)
        .map(|_| build_umi_covariance(&params, &steer, rng))
        .collect::<Result<Vec<_>>>()?;
    let mut h = CMatrix::zeros(m, k);
    for (u, c) in covs.iter().enumerate() {
        let f = factorize(c, 1e-13)?;
        h.set_column(u, &sample_channel(&f, c.mean(), rng)?);
    }
    Ok((covs, h))
}

fn columns(h: &CMatrix) -> impl Iterator<Item = CVector> + '_ {
    h.column_iter().map(|c| c.into_owned())
}

fn rng_for(seed: u64, check: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[check]))
}

type Check = fn(u64) -> Result<CheckOutcome>;

/// Runs every check.
pub fn run_verify(seed: u64) -> Vec<CheckOutcome> {
    let checks: [(&'static str, Check); 11] = [
        ("semi_unitary_pilots", check_semi_unitary),
        ("ls_zf_exact_nulling", check_ls_zf_nulling),
        ("genie_zf_scaled_identity", check_genie_scaled_identity),
        ("lmmse_zf_residual_interference", check_lmmse_residual),
        ("ls_mse_anchor", check_ls_mse_anchor),
        ("mse_ordering", check_mse_ordering),
        ("mse_error_floors", check_mse_floors),
        ("precoder_normalization", check_precoder_normalization),
        ("lmmse_scaled_ls", check_lmmse_scaled_ls),
        ("lmmse_asymptotic_agreement", check_lmmse_asymptotic),
        ("ls_asymptotic_agreement", check_ls_asymptotic),
    ];
    checks
        .iter()
        .enumerate()
        .map(|(i, (name, f))| {
            f(derive_seed(seed, &[i as u64]))
                .unwrap_or_else(|e| CheckOutcome::new(name, false, format!("error: {e}")))
        })
        .collect()
}

fn check_semi_unitary(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let mut worst_gram: f64 = 0.0;
    let mut worst_proj: f64 = 0.0;
    for kind in [
        PilotKind::DftSubset,
        PilotKind::RandomSemiUnitary,
        PilotKind::IdentitySubset,
    ] {
        for _ in 0..20 {
            let m = rng.gen_range(1..=64);
            let t = rng.gen_range(1..=m);
            let phi = make_pilot_matrix(m, t, kind, &mut rng)?;
            let gram = phi.matrix().ad_mul(phi.matrix());
            worst_gram = worst_gram.max(max_abs(&(gram - CMatrix::identity(t, t))));
            let p = phi.projector();
            worst_proj = worst_proj.max(max_abs(&(&p * &p - &p)));
        }
    }
    let passed = worst_gram <= 1e-10 && worst_proj <= 1e-10;
    Ok(CheckOutcome::new(
        "semi_unitary_pilots",
        passed,
        format!("max |ΦᴴΦ - I| = {worst_gram:.2e}, max |P² - P| = {worst_proj:.2e} (limit 1e-10)"),
    ))
}

fn check_ls_zf_nulling(seed: u64) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for t in [8, 16, 31] {
        let mut rng = rng_for(seed, t as u64);
        let pilots = make_pilot_matrix(M, t, PilotKind::DftSubset, &mut rng)?;
        for _ in 0..DRAWS {
            let (_, h) = umi_draw(&mut rng, M, K)?;
            let est = columns(&h)
                .map(|col| asymptotic_ls(&pilots, &col))
                .collect::<Result<Vec<_>>>()?;
            let p = zf_precoder(&EstimatedChannelMatrix::from_estimates(&est)?)?;
            worst = worst.max(off_diagonal_ratio(&effective_channel(&h, &p)?));
        }
    }
    Ok(CheckOutcome::new(
        "ls_zf_exact_nulling",
        worst <= 1e-9,
        format!(
            "worst max|off-diag| / min|diag| = {worst:.2e} over T_dl in {{8,16,31}} (limit 1e-9)"
        ),
    ))
}

/// `max_{i≠j} |G_ij| / min_i |G_ii|`
pub fn off_diagonal_ratio(g: &CMatrix) -> f64 {
    let mut off: f64 = 0.0;
    let mut diag = f64::INFINITY;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            if i == j {
                diag = diag.min(g[(i, j)].norm());
            } else {
                off = off.max(g[(i, j)].norm());
            }
        }
    }
    off / diag
}

fn check_genie_scaled_identity(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..3 * DRAWS {
        let (_, h) = umi_draw(&mut rng, M, K)?;
        let p = zf_precoder(&EstimatedChannelMatrix::from_matrix(h.clone())?)?;
        let delta = p.normalization();
        worst = worst.max(scaled_identity_defect(&effective_channel(&h, &p)?, delta) / delta);
    }
    Ok(CheckOutcome::new(
        "genie_zf_scaled_identity",
        worst <= 1e-9,
        format!("worst ‖HᴴP - δI‖_max / δ = {worst:.2e} (limit 1e-9)"),
    ))
}

fn check_lmmse_residual(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let pilots = make_pilot_matrix(M, 16, PilotKind::DftSubset, &mut rng)?;
    let mut above = 0;
    let mut singular = 0;
    for _ in 0..DRAWS {
        let (covs, h) = umi_draw(&mut rng, M, K)?;
        let est: Result<Vec<ChannelEstimate>> = columns(&h)
            .zip(&covs)
            .map(|(col, c)| asymptotic_lmmse(&pilots, &col, c))
            .collect();
        let Ok(est) = est else {
            singular += 1;
            continue;
        };
        let Ok(p) = zf_precoder(&EstimatedChannelMatrix::from_estimates(&est)?) else {
            singular += 1;
            continue;
        };
        let (desired, interference) = power_split(&effective_channel(&h, &p)?);
        if interference > 1e-6 * desired {
            above += 1;
        }
    }
    Ok(CheckOutcome::new(
        "lmmse_zf_residual_interference",
        above >= 95,
        format!(
            "{above}/{DRAWS} draws with interference > 1e-6 x desired power (need 95); \
             {singular} draws had a singular pilot Gram or estimate matrix"
        ),
    ))
}

fn check_ls_mse_anchor(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let pilots = make_pilot_matrix(M, M, PilotKind::DftSubset, &mut rng)?;
    let (covs, _) = umi_draw(&mut rng, M, 1)?;
    let cov = &covs[0];
    let factor = factorize(cov, 1e-13)?;
    let mut closed_defect: f64 = 0.0;
    let mut mc = Vec::new();
    for (power_db, expected) in [(0.0, 32.0), (40.0, 0.0032)] {
        let sigma2 = 10f64.powf(-power_db / 10.0);
        let closed = mse_closed_form_ls(&pilots, cov, sigma2)?;
        closed_defect = closed_defect.max((closed - M as f64 * sigma2).abs() / (M as f64 * sigma2));
        let n = 2000;
        let mut total = 0.0;
        for _ in 0..n {
            let h = sample_channel(&factor, cov.mean(), &mut rng)?;
            let obs = observe(&pilots, &h, sigma2, &mut rng)?;
            total += mse_sample(&h, &estimate_ls(&pilots, &obs)?)?;
        }
        let mean = total / n as f64;
        mc.push((power_db, mean, (mean - expected).abs() / expected));
    }
    let passed = closed_defect <= 1e-10 && mc.iter().all(|&(_, _, rel)| rel <= 0.05);
    let mc_text: Vec<String> = mc
        .iter()
        .map(|(p, mean, rel)| format!("{p} dB: {mean:.5e} ({:.2}% off)", 100.0 * rel))
        .collect();
    Ok(CheckOutcome::new(
        "ls_mse_anchor",
        passed,
        format!(
            "T_dl = M: closed form vs M·σ² rel defect {closed_defect:.1e}; Monte-Carlo {}",
            mc_text.join(", ")
        ),
    ))
}

/// Random PSD covariance `A Aᴴ` scaled to trace `m`, with rank `r`.
pub fn random_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    r: usize,
) -> Result<ChannelCovariance> {
    let a = complex_gaussian_matrix(rng, m, r);
    let mut c = &a * a.adjoint();
    let tr: f64 = (0..m).map(|i| c[(i, i)].re).sum();
    c *= C64::new(m as f64 / tr, 0.0);
    ChannelCovariance::new(c)
}

fn check_mse_ordering(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut skipped = 0;
    for case in 0..50 {
        let m = rng.gen_range(4..=32);
        let t = rng.gen_range(1..=m);
        let kind = [PilotKind::DftSubset, PilotKind::RandomSemiUnitary][case % 2];
        let pilots = make_pilot_matrix(m, t, kind, &mut rng)?;
        let cov = if case % 3 == 0 {
            let steer = SteeringParams::half_wavelength(m)?;
            build_umi_covariance(&UmiModelParams::default(), &steer, &mut rng)?
        } else {
            let r = rng.gen_range(1..=m);
            random_covariance(&mut rng, m, r)?
        };
        let sigma2 = 10f64.powf(rng.gen_range(-4.0..2.0));
        let ls = mse_closed_form_ls(&pilots, &cov, sigma2)?;
        match mse_closed_form_lmmse(&pilots, &cov, sigma2) {
            Ok(lmmse) => worst = worst.max((lmmse - ls) / ls.max(f64::MIN_POSITIVE)),
            Err(_) => skipped += 1,
        }
    }
    Ok(CheckOutcome::new(
        "mse_ordering",
        worst <= 1e-10 && skipped == 0,
        format!("max (LMMSE - LS)/LS = {worst:.2e} over 50 cases, {skipped} failed"),
    ))
}

/// Closed-form MSEs along `σ² = 10⁻², …, 10⁻¹²`.
fn floor_ladder(pilots: &PilotMatrix, cov: &ChannelCovariance) -> Result<(Vec<f64>, Vec<f64>)> {
    let ladder: Vec<f64> = (1..=6).map(|i| 10f64.powi(-2 * i)).collect();
    let ls = ladder
        .iter()
        .map(|&s| mse_closed_form_ls(pilots, cov, s))
        .collect::<Result<_>>()?;
    let lmmse = ladder
        .iter()
        .map(|&s| mse_closed_form_lmmse(pilots, cov, s))
        .collect::<Result<_>>()?;
    Ok((ls, lmmse))
}

fn check_mse_floors(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let pilots = make_pilot_matrix(M, 16, PilotKind::DftSubset, &mut rng)?;
    let mut failures = Vec::new();
    let mut lowest: f64 = f64::INFINITY;
    for case in 0..10 {
        let (covs, _) = umi_draw(&mut rng, M, 1)?;
        let cov = &covs[0];
        let (ls, lmmse) = floor_ladder(&pilots, cov)?;
        let ls_floor = mse_closed_form_ls(&pilots, cov, 0.0)?;
        let lmmse_floor = *lmmse.last().unwrap_or(&f64::NAN);
        let nonincreasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        lowest = lowest.min(lmmse_floor / cov.trace());
        let ok = nonincreasing(&ls)
            && nonincreasing(&lmmse)
            && ls_floor > 0.0
            && lmmse_floor > 1e-3 * cov.trace()
            && lmmse_floor <= ls_floor * (1.0 + 1e-12);
        if !ok {
            failures.push(format!(
                "case {case}: LS floor {ls_floor:.3e}, LMMSE {lmmse_floor:.3e}"
            ));
        }
    }
    Ok(CheckOutcome::new(
        "mse_error_floors",
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "T_dl = 16, 10 covariances: both MSEs nonincreasing down to σ² = 1e-12, \
                 LMMSE floor <= LS floor, smallest LMMSE floor / tr(C) = {lowest:.3}"
            )
        } else {
            failures.join("; ")
        },
    ))
}

fn check_precoder_normalization(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=8);
        let m = rng.gen_range(k..=40);
        let h = EstimatedChannelMatrix::from_matrix(complex_gaussian_matrix(&mut rng, m, k))?;
        for p in [zf_precoder(&h)?, mf_precoder(&h)?] {
            worst = worst.max((p.matrix().norm_squared() - 1.0).abs());
        }
    }
    Ok(CheckOutcome::new(
        "precoder_normalization",
        worst <= 1e-10,
        format!("max |tr(PPᴴ) - 1| = {worst:.2e} (limit 1e-10)"),
    ))
}

fn check_lmmse_scaled_ls(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m = rng.gen_range(2..=32);
        let t = rng.gen_range(1..=m);
        let c = 10f64.powf(rng.gen_range(-1.0..1.0));
        let sigma2 = 10f64.powf(rng.gen_range(-3.0..1.0));
        let pilots = make_pilot_matrix(m, t, PilotKind::RandomSemiUnitary, &mut rng)?;
        let cov = build_scaled_identity(c, m)?;
        let f = factorize(&cov, 1e-13)?;
        let h = sample_channel(&f, cov.mean(), &mut rng)?;
        let obs = observe(&pilots, &h, sigma2, &mut rng)?;
        let ls = estimate_ls(&pilots, &obs)?.h_hat;
        let lmmse = estimate_lmmse(&pilots, &obs, &cov, sigma2)?.h_hat;
        let expected = &ls * C64::new(c / (c + sigma2), 0.0);
        worst = worst.max(relative_defect(&lmmse, &expected));
    }
    Ok(CheckOutcome::new(
        "lmmse_scaled_ls",
        worst <= 1e-12,
        format!("C = cI: max relative |ĥ_LMMSE - c/(c+σ²)·ĥ_LS| = {worst:.2e} (limit 1e-12)"),
    ))
}

fn relative_defect(a: &CVector, b: &CVector) -> f64 {
    let scale = b
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

fn check_lmmse_asymptotic(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 50 {
        let m = rng.gen_range(2..=24);
        let t = rng.gen_range(1..=m);
        let pilots = make_pilot_matrix(m, t, PilotKind::RandomSemiUnitary, &mut rng)?;
        let cov = random_covariance(&mut rng, m, m)?;
        if !pilot_gram_below(&pilots, &cov, 1e6) {
            continue;
        }
        cases += 1;
        let f = factorize(&cov, 1e-13)?;
        let h = sample_channel(&f, cov.mean(), &mut rng)?;
        let obs = observe(&pilots, &h, 0.0, &mut rng)?;
        let noisy = estimate_lmmse(&pilots, &obs, &cov, 1e-10)?.h_hat;
        let limit = asymptotic_lmmse(&pilots, &h, &cov)?.h_hat;
        worst = worst.max((&noisy - &limit).norm() / limit.norm());
    }
    Ok(CheckOutcome::new(
        "lmmse_asymptotic_agreement",
        worst <= 1e-4,
        format!("σ² = 1e-10 vs noiseless limit, cond(ΦᴴCΦ) < 1e6: max rel error {worst:.2e} (limit 1e-4)"),
    ))
}

fn pilot_gram_below(pilots: &PilotMatrix, cov: &ChannelCovariance, limit: f64) -> bool {
    let phi = pilots.matrix();
    hermitian_condition(&phi.ad_mul(&(cov.matrix() * phi))) < limit
}

fn check_ls_asymptotic(seed: u64) -> Result<CheckOutcome> {
    let mut rng = rng_for(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m = rng.gen_range(1..=32);
        let t = rng.gen_range(1..=m);
        let pilots = make_pilot_matrix(m, t, PilotKind::DftSubset, &mut rng)?;
        let h = complex_gaussian_matrix(&mut rng, m, 1)
            .column(0)
            .into_owned();
        let obs = observe(&pilots, &h, 0.0, &mut rng)?;
        let a = estimate_ls(&pilots, &obs)?.h_hat;
        let b = asymptotic_ls(&pilots, &h)?.h_hat;
        worst = worst.max(relative_defect(&a, &b));
    }
    let genie_ok = {
        let h = CVector::from_element(3, C64::new(1.0, -2.0));
        genie(&h).h_hat == h
    };
    Ok(CheckOutcome::new(
        "ls_asymptotic_agreement",
        worst <= 1e-12 && genie_ok,
        format!("noiseless LS vs ΦΦᴴh: max rel defect {worst:.2e} (limit 1e-12)"),
    ))
}
