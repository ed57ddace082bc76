//! Estimation pipeline against exact model spectra: truncation convergence,
//! sample-size monotonicity, and the error-budget chain.

use ldm_sim::{
    autocorr_exact, psdm_exact, simulate, Edge, LdgModel, NoiseSpec,
};
use nalgebra::{Complex, DMatrix};
use spectral_est::*;

fn test_model() -> LdgModel {
    LdgModel::new(
        3,
        vec![
            Edge { from: 0, to: 1, gain: 0.8, taps: None },
            Edge { from: 2, to: 1, gain: 0.5, taps: None },
            Edge { from: 1, to: 2, gain: 0.4, taps: None },
        ],
        vec![vec![0.5], vec![0.6, -0.2], vec![0.4, 0.1]],
        vec![
            NoiseSpec::Variance(1.0),
            NoiseSpec::Variance(1.3),
            NoiseSpec::Fir(vec![1.0, 0.3]),
        ],
        Default::default(),
    )
    .unwrap()
}

fn z_eval() -> Complex<f64> {
    Complex::from_polar(1.0, 3.0 * std::f64::consts::PI / 8.0)
}

#[test]
fn exact_lags_reproduce_truncated_sum() {
    let m = test_model();
    let p = 12;
    let r = autocorr_exact(&m, p, 4096).unwrap();
    let est = CorrelogramEstimate::from_lags(r.clone(), 0).unwrap();
    let z = z_eval();
    let phi = truncated_psdm(&est, z).unwrap();
    // independent evaluation of the same truncated series, no pair trick
    let mut direct = DMatrix::<Complex<f64>>::zeros(3, 3);
    for k in -(p as i32)..=(p as i32) {
        let rk = if k >= 0 { r[k as usize].clone() } else { r[(-k) as usize].transpose() };
        let w = z.powi(-k);
        for i in 0..3 {
            for j in 0..3 {
                direct[(i, j)] += Complex::new(rk[(i, j)], 0.0) * w;
            }
        }
    }
    assert!((&phi - direct).norm() < 1e-10);
}

#[test]
fn truncated_series_converges_to_exact_psdm() {
    let m = test_model();
    let z = z_eval();
    let exact = psdm_exact(&m, z).unwrap();
    let mut prev = f64::INFINITY;
    for p in [2usize, 6, 14] {
        let r = autocorr_exact(&m, p, 4096).unwrap();
        let est = CorrelogramEstimate::from_lags(r, 0).unwrap();
        let err = (truncated_psdm(&est, z).unwrap() - &exact).camax();
        assert!(err <= prev * 1.001, "p = {p}: error {err} grew past {prev}");
        prev = err;
    }
    assert!(prev < 1e-4, "p = 14 residual {prev}");
}

#[test]
fn truncation_error_within_fitted_bound() {
    let m = test_model();
    let z = z_eval();
    let exact = psdm_exact(&m, z).unwrap();
    let r = autocorr_exact(&m, 30, 4096).unwrap();
    let (rho, c1) = fit_mixing(&lag_norms(&r)).unwrap();
    for p in [4usize, 8, 12] {
        let est = CorrelogramEstimate::from_lags(r[..=p].to_vec(), 0).unwrap();
        let err = (truncated_psdm(&est, z).unwrap() - &exact).camax();
        let bound = truncation_bound(rho, c1, p).unwrap();
        assert!(err <= bound, "p = {p}: measured {err} exceeds bound {bound}");
    }
}

#[test]
fn estimation_error_shrinks_with_samples() {
    let m = test_model();
    let z = z_eval();
    let p = 8;
    let exact = psdm_exact(&m, z).unwrap();
    let mut medians = Vec::new();
    for n_samples in [1_000usize, 10_000, 100_000] {
        let mut errs: Vec<f64> = (0..5)
            .map(|seed| {
                let x = simulate(&m, n_samples, seed).unwrap();
                let est = CorrelogramEstimate::from_series(&x, p).unwrap();
                (truncated_psdm(&est, z).unwrap() - &exact).camax()
            })
            .collect();
        errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians.push(errs[2]);
    }
    assert!(
        medians[0] >= medians[1] && medians[1] >= medians[2],
        "medians not decreasing: {medians:?}"
    );
}

#[test]
fn triangle_split_holds() {
    let m = test_model();
    let z = z_eval();
    let p = 8;
    let exact = psdm_exact(&m, z).unwrap();
    let r = autocorr_exact(&m, p, 4096).unwrap();
    let truncated = truncated_psdm(&CorrelogramEstimate::from_lags(r, 0).unwrap(), z).unwrap();
    let x = simulate(&m, 50_000, 3).unwrap();
    let estimated =
        truncated_psdm(&CorrelogramEstimate::from_series(&x, p).unwrap(), z).unwrap();
    let total = (&exact - &estimated).camax();
    let trunc = (&exact - &truncated).camax();
    let sample = (&truncated - &estimated).camax();
    assert!(total <= trunc + sample + 1e-12);
}

#[test]
fn inverse_estimate_tracks_exact_inverse() {
    let m = test_model();
    let z = z_eval();
    let exact_inv = psdm_exact(&m, z).unwrap().try_inverse().unwrap();
    let x = simulate(&m, 200_000, 11).unwrap();
    let est = CorrelogramEstimate::from_series(&x, 12).unwrap();
    let phi_hat = truncated_psdm(&est, z).unwrap();
    let inv_hat = ipsdm_estimate(&phi_hat).unwrap();
    let rel = (&inv_hat - &exact_inv).camax() / exact_inv.camax();
    assert!(rel < 0.1, "inverse estimate off by {rel}");
}
