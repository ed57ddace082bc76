use nalgebra::DMatrix;

use crate::error::Error;

/// Elementwise soft threshold `sign(m)·max(|m|−λ, 0)`, the proximal operator
/// of `λ‖·‖₁`. Odd function, so skew input maps to skew output.
pub fn soft_threshold(m: &DMatrix<f64>, lambda: f64) -> Result<DMatrix<f64>, Error> {
    if lambda < 0.0 {
        return Err(Error::Parameter(format!(
            "soft_threshold requires lambda >= 0, got {lambda}"
        )));
    }
    Ok(m.map(|v| {
        if v > lambda {
            v - lambda
        } else if v < -lambda {
            v + lambda
        } else {
            0.0
        }
    }))
}

/// Singular value thresholding `U·shrink(Σ,λ)·Vᵀ`, the proximal operator of
/// `λ‖·‖_*`. Skew input stays skew up to SVD roundoff because the singular
/// values of a skew matrix come in equal pairs; callers that need exact
/// antisymmetry re-project afterwards.
pub fn svt(m: &DMatrix<f64>, lambda: f64) -> Result<DMatrix<f64>, Error> {
    if lambda < 0.0 {
        return Err(Error::Parameter(format!(
            "svt requires lambda >= 0, got {lambda}"
        )));
    }
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let shrunk = svd.singular_values.map(|s| (s - lambda).max(0.0));
    let mut scaled = u.clone();
    for (k, col) in scaled.column_iter_mut().enumerate() {
        let mut col = col;
        col *= shrunk[k];
    }
    Ok(scaled * vt)
}
