//! Invariants that must hold for every admissible input.

mod common;

use common::*;
use proptest::prelude::*;
use zfsim_core::prelude::*;

fn pilot_kind() -> impl Strategy<Value = PilotKind> {
    prop_oneof![
        Just(PilotKind::DftSubset),
        Just(PilotKind::RandomSemiUnitary),
        Just(PilotKind::IdentitySubset),
    ]
}

/// `(M, T_dl)` with `1 <= T_dl <= M`.
fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=24).prop_flat_map(|m| (Just(m), 1..=m))
}

/// `(M, K)` with `1 <= K <= M`.
fn users() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=16).prop_flat_map(|m| (Just(m), 1..=m.min(6)))
}

fn condition(m: &CMatrix) -> f64 {
    let ev = m.clone().symmetric_eigenvalues();
    ev.max() / ev.min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pilots_are_semi_unitary((m, t) in dims(), kind in pilot_kind(), seed: u64) {
        let p = make_pilot_matrix(m, t, kind, &mut rng(seed)).unwrap();
        let phi = p.matrix();
        prop_assert!(max_abs(&(phi.adjoint() * phi - CMatrix::identity(t, t))) < 1e-12);
        let proj = p.projector();
        prop_assert!(max_abs(&(&proj * &proj - &proj)) < 1e-12);
        prop_assert!(max_abs(&(&proj - proj.adjoint())) < 1e-12);
        if t == m {
            prop_assert!(max_abs(&(proj - CMatrix::identity(m, m))) < 1e-12);
        }
    }

    #[test]
    fn precoders_have_unit_power((m, k) in users(), seed: u64) {
        let h = complex_gaussian_matrix(&mut rng(seed), m, k);
        let est = EstimatedChannelMatrix::from_matrix(h).unwrap();
        let mf = mf_precoder(&est).unwrap();
        prop_assert!(((mf.matrix() * mf.matrix().adjoint()).trace().re - 1.0).abs() < 1e-12);
        if let Ok(zf) = zf_precoder(&est) {
            prop_assert!(((zf.matrix() * zf.matrix().adjoint()).trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zf_directions_ignore_column_scaling((m, k) in users(), seed: u64) {
        let mut r = rng(seed);
        let h = complex_gaussian_matrix(&mut r, m, k);
        let d = CMatrix::from_diagonal(&CVector::from_fn(k, |_, _| {
            let z = complex_gaussian(&mut r, 1, 1.0)[0];
            z + z / c(z.norm(), 0.0) // bounded away from zero
        }));
        let Ok(p) = zf_precoder(&EstimatedChannelMatrix::from_matrix(h.clone()).unwrap()) else {
            return Ok(());
        };
        let Ok(q) = zf_precoder(&EstimatedChannelMatrix::from_matrix(&h * &d).unwrap()) else {
            return Ok(());
        };
        // δ' Ĥ G⁻¹ D⁻ᴴ · Dᴴ / δ' = Ĥ G⁻¹
        let lhs = q.matrix() * d.adjoint() / c(q.normalization(), 0.0);
        let rhs = p.matrix() / c(p.normalization(), 0.0);
        prop_assert!(max_abs(&(&lhs - &rhs)) < 1e-8 * max_abs(&rhs));
    }

    #[test]
    fn sinr_ignores_user_phases((m, k) in users(), seed: u64, phases in prop::collection::vec(0.0..std::f64::consts::TAU, 6)) {
        let mut r = rng(seed);
        let h = complex_gaussian_matrix(&mut r, m, k);
        let est = complex_gaussian_matrix(&mut r, m, k);
        let p = mf_precoder(&EstimatedChannelMatrix::from_matrix(est).unwrap()).unwrap();
        let rotated = CMatrix::from_fn(m, k, |i, j| h[(i, j)] * C64::from_polar(1.0, phases[j]));
        let a = sinr_per_user(&h, &p, 0.1).unwrap();
        let b = sinr_per_user(&rotated, &p, 0.1).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * x.max(1.0));
        }
    }

    #[test]
    fn lmmse_with_scaled_identity_is_shrunk_ls((m, t) in dims(), scale in 0.1f64..10.0, sigma2 in 1e-3f64..10.0, seed: u64) {
        let mut r = rng(seed);
        let pilots = make_pilot_matrix(m, t, PilotKind::RandomSemiUnitary, &mut r).unwrap();
        let cov = build_scaled_identity(scale, m).unwrap();
        let h = complex_gaussian(&mut r, m, scale);
        let obs = observe(&pilots, &h, sigma2, &mut r).unwrap();
        let ls = estimate_ls(&pilots, &obs).unwrap().h_hat;
        let lmmse = estimate_lmmse(&pilots, &obs, &cov, sigma2).unwrap().h_hat;
        let expected = ls * c(scale / (scale + sigma2), 0.0);
        prop_assert!((lmmse - &expected).camax() < 1e-10 * expected.camax().max(1e-12));
    }

    #[test]
    fn lmmse_approaches_its_noiseless_limit((m, t) in dims(), seed: u64) {
        let mut r = rng(seed);
        let pilots = make_pilot_matrix(m, t, PilotKind::DftSubset, &mut r).unwrap();
        let cov = ChannelCovariance::new(wishart(&mut r, m, m + 2)).unwrap();
        let reduced = pilots.matrix().adjoint() * cov.matrix() * pilots.matrix();
        prop_assume!(condition(&reduced) < 1e6);
        let h = complex_gaussian(&mut r, m, 1.0);
        let obs = observe(&pilots, &h, 0.0, &mut r).unwrap();
        let noisy = LmmseFilter::new(&pilots, &cov, 1e-10).unwrap().apply(&obs).unwrap().h_hat;
        let limit = asymptotic_lmmse(&pilots, &h, &cov).unwrap().h_hat;
        prop_assert!((noisy - &limit).norm() <= 1e-4 * limit.norm().max(1e-12));
    }

    #[test]
    fn noiseless_ls_is_the_projection((m, t) in dims(), kind in pilot_kind(), seed: u64) {
        let mut r = rng(seed);
        let pilots = make_pilot_matrix(m, t, kind, &mut r).unwrap();
        let h = complex_gaussian(&mut r, m, 1.0);
        let obs = observe(&pilots, &h, 0.0, &mut r).unwrap();
        let a = estimate_ls(&pilots, &obs).unwrap().h_hat;
        let b = asymptotic_ls(&pilots, &h).unwrap().h_hat;
        prop_assert!((a - b).camax() < 1e-12);
    }

    #[test]
    fn constructed_covariances_are_hermitian(m in 1usize..=32, seed: u64) {
        let steer = SteeringParams::half_wavelength(m).unwrap();
        let umi = build_umi_covariance(&UmiModelParams::default(), &steer, &mut rng(seed)).unwrap();
        let id = build_scaled_identity(2.5, m).unwrap();
        for cov in [umi.matrix(), id.matrix()] {
            prop_assert!(max_abs(&(cov - cov.adjoint())) == 0.0);
            prop_assert!(cov.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        }
        prop_assert!((umi.trace() - m as f64).abs() < 1e-9 * m as f64);
    }

    #[test]
    fn umi_draws_are_reproducible(m in 1usize..=32, seed: u64) {
        let steer = SteeringParams::half_wavelength(m).unwrap();
        let params = UmiModelParams::default();
        let a = build_umi_covariance(&params, &steer, &mut rng(seed)).unwrap();
        let b = build_umi_covariance(&params, &steer, &mut rng(seed)).unwrap();
        prop_assert!(a.matrix().iter().zip(b.matrix().iter()).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
    }

    #[test]
    fn genie_zf_rate_grows_with_power((m, k) in users(), seed: u64) {
        let h = complex_gaussian_matrix(&mut rng(seed), m, k);
        let Ok(p) = zf_precoder(&EstimatedChannelMatrix::from_matrix(h.clone()).unwrap()) else {
            return Ok(());
        };
        let mut last = 0.0;
        for db in (-20..=40).step_by(5) {
            let sigma2 = 10f64.powf(-db as f64 / 10.0);
            let r = rates(&h, &p, sigma2, m.min(4), 200).unwrap().sum_rate;
            prop_assert!(r >= last);
            last = r;
        }
    }
}
