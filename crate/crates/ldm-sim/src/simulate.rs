//! Time-domain simulation of the causal recursion
//! x(k) = Σ_l H̃(l)·x(k−l) + e(k) with Gaussian innovations shaped per node.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{LdgModel, NoiseSpec};

const BURN_IN: usize = 1024;

/// Spectral radius of the one-step companion form of the lag recursion;
/// < 1 means the causal simulation is stable.
pub fn spectral_radius(model: &LdgModel) -> f64 {
    let coeffs = model.lag_coefficients();
    let p = coeffs.len();
    if p == 0 {
        return 0.0;
    }
    let n = model.n();
    let mut companion = DMatrix::zeros(n * p, n * p);
    for (l, c) in coeffs.iter().enumerate() {
        companion.view_mut((0, l * n), (n, n)).copy_from(c);
    }
    for b in 1..p {
        companion
            .view_mut((b * n, (b - 1) * n), (n, n))
            .copy_from(&DMatrix::identity(n, n));
    }
    companion
        .complex_eigenvalues()
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller; one value per call keeps the stream layout simple
    loop {
        let u: f64 = rng.gen::<f64>();
        if u > 0.0 {
            let v: f64 = rng.gen::<f64>();
            return (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
        }
    }
}

/// n × N trajectory of the model, burn-in discarded, deterministic per seed.
pub fn simulate(model: &LdgModel, n_samples: usize, seed: u64) -> Result<DMatrix<f64>, Error> {
    if n_samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    let radius = spectral_radius(model);
    if radius >= 1.0 - 1e-9 {
        return Err(Error::Simulation(format!(
            "unstable causal recursion: companion spectral radius {radius:.6}"
        )));
    }
    let n = model.n();
    let coeffs = model.lag_coefficients();
    let p = coeffs.len();
    let q = model
        .noise()
        .iter()
        .map(|s| match s {
            NoiseSpec::Variance(_) => 0,
            NoiseSpec::Fir(t) => t.len().saturating_sub(1),
        })
        .max()
        .unwrap_or(0);
    let total = n_samples + BURN_IN;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // white innovations with q leading extra columns for the noise memory
    let white = DMatrix::from_fn(n, total + q, |_, _| gaussian(&mut rng));
    let mut noise = DMatrix::zeros(n, total);
    for k in 0..n {
        match &model.noise()[k] {
            NoiseSpec::Variance(v) => {
                let s = v.sqrt();
                for t in 0..total {
                    noise[(k, t)] = s * white[(k, t + q)];
                }
            }
            NoiseSpec::Fir(taps) => {
                for t in 0..total {
                    noise[(k, t)] = taps
                        .iter()
                        .enumerate()
                        .map(|(l, g)| g * white[(k, t + q - l)])
                        .sum();
                }
            }
        }
    }

    let mut x = DMatrix::zeros(n, total);
    for t in 0..total {
        let mut col = noise.column(t).clone_owned();
        for (l, c) in coeffs.iter().enumerate() {
            if t > l {
                col += c * x.column(t - l - 1);
            }
        }
        x.set_column(t, &col);
    }
    let _ = p;
    Ok(x.columns(BURN_IN, n_samples).clone_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Edge;
    use crate::spectral::autocorr_exact;
    use std::collections::BTreeSet;

    fn white_model(n: usize) -> LdgModel {
        LdgModel::new(
            n,
            vec![],
            vec![vec![]; n],
            vec![NoiseSpec::Variance(1.0); n],
            BTreeSet::new(),
        )
        .unwrap()
    }

    #[test]
    fn white_noise_covariance_is_identity() {
        let m = white_model(3);
        let n_samples = 20_000;
        let x = simulate(&m, n_samples, 0).unwrap();
        let cov = &x * x.transpose() / n_samples as f64;
        let err = (cov - DMatrix::identity(3, 3)).amax();
        assert!(err < 0.05, "covariance off by {err}");
    }

    #[test]
    fn deterministic_per_seed() {
        let m = white_model(2);
        assert_eq!(simulate(&m, 100, 5).unwrap(), simulate(&m, 100, 5).unwrap());
        assert_ne!(simulate(&m, 100, 5).unwrap(), simulate(&m, 100, 6).unwrap());
    }

    #[test]
    fn unstable_model_is_rejected() {
        // loop 0⇄1 with loop gain > 1: well-posed on the circle (the roots
        // sit outside), but the causal recursion diverges
        let m = LdgModel::new(
            2,
            vec![
                Edge { from: 0, to: 1, gain: 1.2, taps: None },
                Edge { from: 1, to: 0, gain: 1.2, taps: None },
            ],
            vec![vec![1.2], vec![1.2]],
            vec![NoiseSpec::Variance(1.0); 2],
            BTreeSet::new(),
        )
        .unwrap();
        assert!(spectral_radius(&m) > 1.0);
        assert!(simulate(&m, 10, 0).is_err());
    }

    #[test]
    fn sample_autocorr_approaches_exact() {
        let m = LdgModel::new(
            2,
            vec![Edge { from: 0, to: 1, gain: 0.8, taps: None }],
            vec![vec![0.5], vec![0.7, -0.2]],
            vec![NoiseSpec::Variance(1.0), NoiseSpec::Fir(vec![1.0, 0.3])],
            BTreeSet::new(),
        )
        .unwrap();
        let n_samples = 100_000;
        let x = simulate(&m, n_samples, 42).unwrap();
        let exact = autocorr_exact(&m, 2, 4096).unwrap();
        for (k, r_true) in exact.iter().enumerate() {
            let mut r_hat = DMatrix::zeros(2, 2);
            for t in 0..n_samples - k {
                r_hat += x.column(t + k) * x.column(t).transpose();
            }
            r_hat /= (n_samples - k) as f64;
            let err = (r_hat - r_true).amax() / exact[0].amax();
            assert!(err < 0.05, "lag {k}: relative error {err}");
        }
    }

    #[test]
    fn shaped_noise_matches_target_variance() {
        // e = w(t) + 0.5 w(t−1): variance 1.25
        let m = LdgModel::new(
            1,
            vec![],
            vec![vec![]],
            vec![NoiseSpec::Fir(vec![1.0, 0.5])],
            BTreeSet::new(),
        )
        .unwrap();
        let x = simulate(&m, 50_000, 9).unwrap();
        let var = x.row(0).iter().map(|v| v * v).sum::<f64>() / 50_000.0;
        assert!((var - 1.25).abs() < 0.05, "variance {var}");
    }
}
