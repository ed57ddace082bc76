//! Truncated correlogram spectral estimation: lagged autocorrelation
//! estimates, the truncated PSDM, and its Hermitian-safe inversion.

use nalgebra::{Complex, DMatrix};

use crate::error::Error;

/// Unbiased lag-k autocorrelation estimate over an n × N series:
/// R̂(k) = 1/(N−k) Σ_l x(l+k)·x(l)ᵀ. The later sample sits on the left so
/// that Σ_k R̂(k)z^{−k} (with R̂(−k) = R̂(k)ᵀ) reproduces the forward
/// spectrum of the generating model rather than its transpose.
pub fn estimate_autocorr(x: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>, Error> {
    let (n, len) = (x.nrows(), x.ncols());
    // the concentration analysis needs N − k ≥ n samples in the average
    if len < k + n {
        return Err(Error::LagOutOfRange { k, n, len });
    }
    let count = len - k;
    let mut r = DMatrix::zeros(n, n);
    for l in 0..count {
        r += x.column(l + k) * x.column(l).transpose();
    }
    Ok(r / count as f64)
}

/// Correlogram with lags 0..=p; negative lags are the transposes.
#[derive(Debug, Clone)]
pub struct CorrelogramEstimate {
    p: usize,
    n_samples: usize,
    r_hat: Vec<DMatrix<f64>>,
}

impl CorrelogramEstimate {
    pub fn from_series(x: &DMatrix<f64>, p: usize) -> Result<Self, Error> {
        let r_hat = (0..=p)
            .map(|k| estimate_autocorr(x, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CorrelogramEstimate { p, n_samples: x.ncols(), r_hat })
    }

    /// Wrap known lag matrices (e.g. exact model autocorrelations).
    pub fn from_lags(r: Vec<DMatrix<f64>>, n_samples: usize) -> Result<Self, Error> {
        if r.is_empty() {
            return Err(Error::Parameter("need at least the lag-0 matrix".into()));
        }
        let n = r[0].nrows();
        if r.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::Parameter("lag matrices must be square and same-size".into()));
        }
        Ok(CorrelogramEstimate { p: r.len() - 1, n_samples, r_hat: r })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn dim(&self) -> usize {
        self.r_hat[0].nrows()
    }

    /// R̂(k) for −p ≤ k ≤ p, negative lags by transposition.
    pub fn r(&self, k: isize) -> Result<DMatrix<f64>, Error> {
        let a = k.unsigned_abs();
        if a > self.p {
            return Err(Error::LagOutOfRange { k: a, n: self.dim(), len: self.p });
        }
        Ok(if k >= 0 {
            self.r_hat[a].clone()
        } else {
            self.r_hat[a].transpose()
        })
    }

    pub fn lag_norms_inf(&self) -> Vec<f64> {
        self.r_hat.iter().map(|m| m.amax()).collect()
    }
}

fn unit_circle_check(z: Complex<f64>) -> Result<(), Error> {
    let r = z.norm();
    if (r - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitCircle(r));
    }
    Ok(())
}

/// Φ̂(z) = Σ_{k=−p}^{p} R̂(k) z^{−k}, assembled as R̂(0)'s symmetric part
/// plus conjugate pairs so the output is Hermitian exactly.
pub fn truncated_psdm(
    est: &CorrelogramEstimate,
    z: Complex<f64>,
) -> Result<DMatrix<Complex<f64>>, Error> {
    unit_circle_check(z)?;
    let n = est.dim();
    let r0 = est.r(0)?;
    let mut phi =
        DMatrix::from_fn(n, n, |i, j| Complex::new(0.5 * (r0[(i, j)] + r0[(j, i)]), 0.0));
    for k in 1..=est.p() {
        let rk = est.r(k as isize)?;
        let w = z.powi(-(k as i32));
        for i in 0..n {
            for j in 0..n {
                let term = Complex::new(rk[(i, j)], 0.0) * w;
                let pair = Complex::new(rk[(j, i)], 0.0) * w.conj();
                phi[(i, j)] += term + pair;
            }
        }
    }
    Ok(phi)
}

/// Hermitian-symmetrized inverse with an explicit conditioning guard.
pub fn ipsdm_estimate(phi: &DMatrix<Complex<f64>>) -> Result<DMatrix<Complex<f64>>, Error> {
    let n = phi.nrows();
    if phi.ncols() != n {
        return Err(Error::Parameter("matrix must be square".into()));
    }
    if (phi - phi.adjoint()).norm() > 1e-8 * phi.norm().max(1.0) {
        return Err(Error::Parameter("matrix must be Hermitian".into()));
    }
    let eigs = phi.symmetric_eigenvalues();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for e in eigs.iter() {
        lo = lo.min(*e);
        hi = hi.max(e.abs());
    }
    if lo <= 1e-8 * hi {
        return Err(Error::Conditioning(format!(
            "spectrum not safely positive: min eigenvalue {lo:.3e}, condition number {:.3e}",
            hi / lo.abs().max(f64::MIN_POSITIVE)
        )));
    }
    let inv = phi
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Conditioning("inversion failed".into()))?;
    Ok((&inv + inv.adjoint()) * Complex::new(0.5, 0.0))
}
