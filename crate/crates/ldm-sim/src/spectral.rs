//! Exact spectral quantities of a model: power spectral density matrix, its
//! inverse on the observed block, and the sparse + low-rank ground truth.

use nalgebra::{Complex, DMatrix};

use crate::error::Error;
use crate::model::{unit_circle_check, LdgModel};

fn hermitianize(m: &DMatrix<Complex<f64>>) -> DMatrix<Complex<f64>> {
    (m + m.adjoint()) * Complex::new(0.5, 0.0)
}

/// Imaginary part as a real matrix, exactly antisymmetrized (skew for any
/// Hermitian input).
pub fn imag_skew(m: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let im = m.map(|v| v.im);
    (&im - im.transpose()) * 0.5
}

pub fn select(
    m: &DMatrix<Complex<f64>>,
    rows: &[usize],
    cols: &[usize],
) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

fn invert(m: DMatrix<Complex<f64>>, what: &str) -> Result<DMatrix<Complex<f64>>, Error> {
    m.try_inverse()
        .ok_or_else(|| Error::Conditioning(format!("{what} is singular")))
}

fn noise_inverse_diag(model: &LdgModel, z: Complex<f64>) -> Result<Vec<Complex<f64>>, Error> {
    Ok(model
        .noise_psd_diag(z)?
        .into_iter()
        .map(|p| Complex::new(1.0 / p, 0.0))
        .collect())
}

/// Φ_x(z) = (I−H)^{-1} Φ_e (I−H)^{-*}: Hermitian positive definite for any
/// admissible model.
pub fn psdm_exact(model: &LdgModel, z: Complex<f64>) -> Result<DMatrix<Complex<f64>>, Error> {
    let n = model.n();
    let h = model.eval_h(z)?;
    let a = invert(DMatrix::identity(n, n) - h, "I − H(z)")?;
    let mut phi_e = DMatrix::zeros(n, n);
    for (k, p) in model.noise_psd_diag(z)?.into_iter().enumerate() {
        phi_e[(k, k)] = Complex::new(p, 0.0);
    }
    Ok(hermitianize(&(&a * phi_e * a.adjoint())))
}

/// Φ_x^{-1}(z) = (I−H*) Φ_e^{-1} (I−H), formed directly (no inversion).
pub fn ipsdm_full(model: &LdgModel, z: Complex<f64>) -> Result<DMatrix<Complex<f64>>, Error> {
    let n = model.n();
    let h = model.eval_h(z)?;
    let a = DMatrix::identity(n, n) - h;
    let winv = noise_inverse_diag(model, z)?;
    let mut scaled = a.clone();
    for i in 0..n {
        for j in 0..n {
            scaled[(i, j)] *= winv[i];
        }
    }
    Ok(hermitianize(&(a.adjoint() * scaled)))
}

/// Inverse PSDM of the observed block via the Schur complement of K = Φ_x^{-1}:
/// Φ_oo^{-1} = K_oo − K_oh K_hh^{-1} K_ho.
pub fn ipsdm_observed(model: &LdgModel, z: Complex<f64>) -> Result<DMatrix<Complex<f64>>, Error> {
    let k = ipsdm_full(model, z)?;
    if model.n_h() == 0 {
        return Ok(k);
    }
    let obs = model.observed();
    let hid: Vec<usize> = model.hidden().iter().copied().collect();
    let k_oo = select(&k, &obs, &obs);
    let k_oh = select(&k, &obs, &hid);
    let k_ho = select(&k, &hid, &obs);
    let k_hh_inv = invert(select(&k, &hid, &hid), "hidden block of the inverse PSDM")?;
    Ok(hermitianize(&(k_oo - k_oh * k_hh_inv * k_ho)))
}

/// The sparse + low-rank split of Φ_oo^{-1} with its coupling matrices.
#[derive(Debug, Clone)]
pub struct GroundTruthDecomposition {
    pub s: DMatrix<Complex<f64>>,
    pub l: DMatrix<Complex<f64>>,
    pub psi: DMatrix<Complex<f64>>,
    pub lambda: DMatrix<Complex<f64>>,
    pub z: Complex<f64>,
}

/// S = (I−H_oo)* Φ_{e_o}^{-1} (I−H_oo);
/// Ψ = H_oh* Φ_{e_o}^{-1} (I−H_oo) + (I−H_hh)* Φ_{e_h}^{-1} H_ho;
/// Λ = H_oh* Φ_{e_o}^{-1} H_oh + (I−H_hh)* Φ_{e_h}^{-1} (I−H_hh);
/// L = H_ho* Φ_{e_h}^{-1} H_ho − Ψ* Λ^{-1} Ψ.
pub fn sl_ground_truth(model: &LdgModel, z: Complex<f64>) -> Result<GroundTruthDecomposition, Error> {
    unit_circle_check(z)?;
    let h = model.eval_h(z)?;
    let obs = model.observed();
    let hid: Vec<usize> = model.hidden().iter().copied().collect();
    let (n_o, n_h) = (obs.len(), hid.len());
    let winv = noise_inverse_diag(model, z)?;
    let diag = |idx: &[usize]| {
        let mut d = DMatrix::zeros(idx.len(), idx.len());
        for (p, &k) in idx.iter().enumerate() {
            d[(p, p)] = winv[k];
        }
        d
    };
    let peo = diag(&obs);
    let a_oo = DMatrix::identity(n_o, n_o) - select(&h, &obs, &obs);
    let s = hermitianize(&(a_oo.adjoint() * &peo * &a_oo));

    if n_h == 0 {
        return Ok(GroundTruthDecomposition {
            s,
            l: DMatrix::zeros(n_o, n_o),
            psi: DMatrix::zeros(0, n_o),
            lambda: DMatrix::zeros(0, 0),
            z,
        });
    }

    let peh = diag(&hid);
    let h_oh = select(&h, &obs, &hid);
    let h_ho = select(&h, &hid, &obs);
    let a_hh = DMatrix::identity(n_h, n_h) - select(&h, &hid, &hid);
    let psi = h_oh.adjoint() * &peo * &a_oo + a_hh.adjoint() * &peh * &h_ho;
    let lambda = h_oh.adjoint() * &peo * &h_oh + a_hh.adjoint() * &peh * &a_hh;
    let lambda_inv = invert(lambda.clone(), "Λ")?;
    let l = hermitianize(&(h_ho.adjoint() * &peh * &h_ho - psi.adjoint() * lambda_inv * &psi));
    Ok(GroundTruthDecomposition { s, l, psi, lambda, z })
}

/// Exact autocorrelation sequence R(0..=max_lag) by inverse transform of
/// Φ_x over a uniform grid of the given size.
pub fn autocorr_exact(
    model: &LdgModel,
    max_lag: usize,
    grid_size: usize,
) -> Result<Vec<DMatrix<f64>>, Error> {
    if grid_size == 0 {
        return Err(Error::Parameter("grid_size must be positive".into()));
    }
    let n = model.n();
    let mut acc = vec![DMatrix::<Complex<f64>>::zeros(n, n); max_lag + 1];
    for m in 0..grid_size {
        let theta = 2.0 * std::f64::consts::PI * m as f64 / grid_size as f64;
        let z = Complex::from_polar(1.0, theta);
        let phi = psdm_exact(model, z)?;
        for (k, slot) in acc.iter_mut().enumerate() {
            let w = Complex::from_polar(1.0, theta * k as f64);
            *slot += &phi * w;
        }
    }
    Ok(acc
        .into_iter()
        .map(|m| m.map(|v| v.re / grid_size as f64))
        .collect())
}
