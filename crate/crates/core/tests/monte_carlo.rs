//! Statistical checks of the samplers and estimators against their closed forms.

mod common;

use common::*;
use zfsim_core::prelude::*;

fn sample_mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn identity_covariance_is_recovered() {
    let mut r = rng(100);
    let cov = build_scaled_identity(1.0, 2).unwrap();
    let f = factorize(&cov, 1e-13).unwrap();
    let n = 100_000;
    let mut acc = CMatrix::zeros(2, 2);
    for _ in 0..n {
        let h = sample_channel(&f, cov.mean(), &mut r).unwrap();
        acc += &h * h.adjoint();
    }
    let empirical = acc / c(n as f64, 0.0);
    let err = (empirical - CMatrix::identity(2, 2)).norm();
    assert!(err < 0.05 * 2f64.sqrt(), "Frobenius error {err}");
}

#[test]
fn per_direction_variance_is_half_quadratic_form() {
    let mut r = rng(101);
    let steer = SteeringParams::half_wavelength(16).unwrap();
    let cov = build_umi_covariance(&UmiModelParams::default(), &steer, &mut r).unwrap();
    let f = factorize(&cov, 1e-13).unwrap();
    let dirs: Vec<CVector> = (0..3)
        .map(|i| {
            // one direction aligned with the strongest mode, two random
            let u = if i == 0 {
                column(f.factor(), 0)
            } else {
                complex_gaussian(&mut r, 16, 1.0)
            };
            let n = u.norm();
            u / c(n, 0.0)
        })
        .collect();
    let n = 100_000;
    let mut re = vec![Vec::with_capacity(n); dirs.len()];
    let mut im = vec![Vec::with_capacity(n); dirs.len()];
    for _ in 0..n {
        let h = sample_channel(&f, cov.mean(), &mut r).unwrap();
        for (i, u) in dirs.iter().enumerate() {
            let z = u.dotc(&h);
            re[i].push(z.re);
            im[i].push(z.im);
        }
    }
    for (i, u) in dirs.iter().enumerate() {
        let target = (u.adjoint() * cov.matrix() * u)[(0, 0)].re / 2.0;
        for parts in [&re[i], &im[i]] {
            let var = parts.iter().map(|x| x * x).sum::<f64>() / n as f64;
            assert!(
                (var - target).abs() < 0.05 * target,
                "direction {i}: {var} vs {target}"
            );
        }
    }
}

#[test]
fn observation_noise_power() {
    let mut r = rng(102);
    let pilots = make_pilot_matrix(32, 12, PilotKind::DftSubset, &mut r).unwrap();
    let h = CVector::zeros(32);
    let n = 100_000;
    let total: f64 = (0..n)
        .map(|_| observe(&pilots, &h, 1.0, &mut r).unwrap().y.norm_squared())
        .sum();
    let mean = total / n as f64;
    assert!((mean - 12.0).abs() < 0.03 * 12.0, "{mean}");
}

/// `(covariance, pilots, σ²)` cases for the MSE comparisons.
fn mse_cases() -> Vec<(ChannelCovariance, PilotMatrix, f64)> {
    let mut r = rng(103);
    let steer = SteeringParams::half_wavelength(32).unwrap();
    let umi = build_umi_covariance(&UmiModelParams::default(), &steer, &mut r).unwrap();
    let full = ChannelCovariance::new(wishart(&mut r, 16, 16)).unwrap();
    let with_mean =
        ChannelCovariance::with_mean(wishart(&mut r, 8, 4), complex_gaussian(&mut r, 8, 1.0))
            .unwrap();
    vec![
        (
            umi.clone(),
            make_pilot_matrix(32, 32, PilotKind::DftSubset, &mut r).unwrap(),
            1.0,
        ),
        (
            umi,
            make_pilot_matrix(32, 16, PilotKind::DftSubset, &mut r).unwrap(),
            0.01,
        ),
        (
            full,
            make_pilot_matrix(16, 6, PilotKind::RandomSemiUnitary, &mut r).unwrap(),
            0.3,
        ),
        (
            with_mean,
            make_pilot_matrix(8, 5, PilotKind::DftSubset, &mut r).unwrap(),
            0.1,
        ),
    ]
}

#[test]
fn ls_monte_carlo_mse_matches_closed_form() {
    let mut r = rng(104);
    for (i, (cov, pilots, sigma2)) in mse_cases().into_iter().enumerate() {
        let f = factorize(&cov, 1e-13).unwrap();
        let samples: Vec<f64> = (0..2000)
            .map(|_| {
                let h = sample_channel(&f, cov.mean(), &mut r).unwrap();
                let obs = observe(&pilots, &h, sigma2, &mut r).unwrap();
                mse_sample(&h, &estimate_ls(&pilots, &obs).unwrap()).unwrap()
            })
            .collect();
        let (mean, se) = sample_mean_and_se(&samples);
        let closed = mse_closed_form_ls(&pilots, &cov, sigma2).unwrap();
        assert!(
            (mean - closed).abs() < 0.05 * closed,
            "case {i}: {mean} vs {closed}"
        );
        assert!(
            (mean - closed).abs() < 4.0 * se,
            "case {i}: {mean} vs {closed}, se {se}"
        );
    }
}

#[test]
fn lmmse_monte_carlo_mse_matches_closed_form() {
    let mut r = rng(105);
    for (i, (cov, pilots, sigma2)) in mse_cases().into_iter().enumerate() {
        let f = factorize(&cov, 1e-13).unwrap();
        let filter = LmmseFilter::new(&pilots, &cov, sigma2).unwrap();
        let samples: Vec<f64> = (0..2000)
            .map(|_| {
                let h = sample_channel(&f, cov.mean(), &mut r).unwrap();
                let obs = observe(&pilots, &h, sigma2, &mut r).unwrap();
                mse_sample(&h, &filter.apply(&obs).unwrap()).unwrap()
            })
            .collect();
        let (mean, se) = sample_mean_and_se(&samples);
        let closed = mse_closed_form_lmmse(&pilots, &cov, sigma2).unwrap();
        assert!(
            (mean - closed).abs() < 0.05 * closed,
            "case {i}: {mean} vs {closed}"
        );
        assert!(
            (mean - closed).abs() < 4.0 * se,
            "case {i}: {mean} vs {closed}, se {se}"
        );
    }
}

#[test]
fn lmmse_error_is_orthogonal_to_observation() {
    let mut r = rng(106);
    let m = 6;
    let pilots = make_pilot_matrix(m, 3, PilotKind::RandomSemiUnitary, &mut r).unwrap();
    let cov = ChannelCovariance::with_mean(wishart(&mut r, m, m), complex_gaussian(&mut r, m, 1.0))
        .unwrap();
    let f = factorize(&cov, 1e-13).unwrap();
    let filter = LmmseFilter::new(&pilots, &cov, 0.5).unwrap();
    let n = 10_000;
    let mut products: Vec<Vec<C64>> = vec![Vec::with_capacity(n); m * 3];
    for _ in 0..n {
        let h = sample_channel(&f, cov.mean(), &mut r).unwrap();
        let obs = observe(&pilots, &h, 0.5, &mut r).unwrap();
        let e = &h - filter.apply(&obs).unwrap().h_hat;
        for i in 0..m {
            for j in 0..3 {
                products[i * 3 + j].push(e[i] * obs.y[j].conj());
            }
        }
    }
    for p in &products {
        let re: Vec<f64> = p.iter().map(|z| z.re).collect();
        let im: Vec<f64> = p.iter().map(|z| z.im).collect();
        for part in [re, im] {
            let (mean, se) = sample_mean_and_se(&part);
            assert!(mean.abs() < 5.0 * se, "{mean} vs se {se}");
        }
    }
}
