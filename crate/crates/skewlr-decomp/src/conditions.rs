use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Error;
use crate::skew::SkewMatrix;
use crate::tangent::{
    compact_svd, project_onto_t, transverse_intersection, LowRankTangentSpace, SparseTangentSpace,
    SUPPORT_TOL,
};

pub(crate) fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().max()
}

pub(crate) fn nuclear_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().sum()
}

/// Maximum nonzero count over rows (equivalently columns, by antisymmetry).
/// Entries count as nonzero above 1e-9 relative to the largest entry.
pub fn deg_max(m: &SkewMatrix) -> usize {
    let n = m.n();
    let scale = m.norm_inf();
    if scale == 0.0 {
        return 0;
    }
    let tol = SUPPORT_TOL * scale;
    (0..n)
        .map(|i| (0..n).filter(|&j| m[(i, j)].abs() > tol).count())
        .max()
        .unwrap_or(0)
}

/// Maximum incoherence of the row/column space: `max_k ‖UUᵀe_k‖₂` over the
/// left factor of the compact SVD. Row and column spaces coincide for skew
/// matrices, so only U is consulted. Always in [√(r/n), 1].
pub fn incoherence(l: &SkewMatrix) -> Result<f64, Error> {
    if l.is_zero(0.0) {
        return Err(Error::Domain("incoherence undefined for the zero matrix".into()));
    }
    let (u, _, _) = compact_svd(l)?;
    // ‖UUᵀe_k‖ = ‖Uᵀe_k‖ = norm of the k-th row of U.
    Ok((0..u.nrows())
        .map(|k| u.row(k).norm())
        .fold(0.0f64, f64::max))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MuBound {
    pub value: f64,
    /// False when the support was too large to enumerate and `value` is the
    /// certified upper bound deg_max instead of the exact maximum.
    pub exact: bool,
}

/// μ(S̃) = max spectral norm over {N ∈ Ω(S̃) : ‖N‖_∞ ≤ 1}. The objective is
/// convex, so the maximum sits at a vertex of the box: every support pair at
/// ±1. Enumerates all sign patterns up to `cap` pairs (default 20, i.e. 2²⁰
/// patterns); larger supports fall back to the upper bound deg_max(S̃).
pub fn mu_exact(s: &SkewMatrix, cap: usize) -> MuBound {
    let omega = SparseTangentSpace::from_matrix(s);
    let pairs: Vec<(usize, usize)> = omega.support().iter().copied().collect();
    let p = pairs.len();
    if p == 0 {
        return MuBound { value: 0.0, exact: true };
    }
    if p > cap {
        return MuBound {
            value: deg_max(s) as f64,
            exact: false,
        };
    }
    let n = s.n();
    let mut best = 0.0f64;
    // N and -N share a norm: fix the first pair's sign.
    for mask in 0..(1u64 << (p - 1)) {
        let mut m = DMatrix::zeros(n, n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let sign = if k == 0 || (mask >> (k - 1)) & 1 == 0 { 1.0 } else { -1.0 };
            m[(i, j)] = sign;
            m[(j, i)] = -sign;
        }
        best = best.max(spectral_norm(&m));
    }
    MuBound { value: best, exact: true }
}

pub const MU_ENUM_CAP: usize = 20;

/// ξ(L̃) = max ‖N‖_∞ over {N ∈ T(L̃) : ‖N‖₂ ≤ 1}, evaluated by norm duality:
/// for each entry, `sup ⟨N, B_ij⟩ = ‖Π_T(B_ij)‖_*` with `B_ij = (E_ij−E_ji)/2`
/// (the skew part of the entry functional). Equals the maximum of those
/// nuclear norms over all pairs.
pub fn xi_exact(l: &SkewMatrix) -> Result<f64, Error> {
    if l.is_zero(0.0) {
        return Err(Error::Domain("xi undefined for the zero matrix".into()));
    }
    let space = LowRankTangentSpace::from_matrix(l)?;
    let n = l.n();
    let mut best = 0.0f64;
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            b[(i, j)] = 0.5;
            b[(j, i)] = -0.5;
            let proj = project_onto_t(&space, &b)?;
            best = best.max(nuclear_norm(&proj));
            b[(i, j)] = 0.0;
            b[(j, i)] = 0.0;
        }
    }
    Ok(best)
}

/// Open interval of γ for which the decomposition is provably unique when
/// μ·ξ < 1/6; empty otherwise.
pub fn gamma_range_muxi(mu: f64, xi: f64) -> Result<Option<(f64, f64)>, Error> {
    if mu <= 0.0 || xi <= 0.0 {
        return Err(Error::Parameter("mu and xi must be positive".into()));
    }
    if mu * xi >= 1.0 / 6.0 {
        return Ok(None);
    }
    Ok(Some((xi / (1.0 - 4.0 * mu * xi), (1.0 - 3.0 * mu * xi) / mu)))
}

/// Coarser γ interval from the countable surrogates: nonempty iff
/// deg_max·inc < 1/12.
pub fn gamma_range_deg_inc(deg: usize, inc: f64) -> Result<Option<(f64, f64)>, Error> {
    if deg == 0 {
        return Err(Error::Parameter("empty support: deg_max must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&inc) || inc == 0.0 {
        return Err(Error::Parameter(format!("inc must lie in (0,1], got {inc}")));
    }
    let d = deg as f64;
    if d * inc >= 1.0 / 12.0 {
        return Ok(None);
    }
    Ok(Some((
        2.0 * inc / (1.0 - 8.0 * d * inc),
        (1.0 - 6.0 * d * inc) / d,
    )))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct YoulaCheck {
    pub holds: bool,
    pub deviation: f64,
}

/// Left and right singular subspaces of a skew matrix coincide:
/// `UUᵀ = VVᵀ` for the compact SVD. Returns the Frobenius deviation.
pub fn youla_projection_check(m: &SkewMatrix) -> Result<YoulaCheck, Error> {
    if m.is_zero(0.0) {
        return Err(Error::Domain("zero matrix".into()));
    }
    let (u, _, v) = compact_svd(m)?;
    let r = u.ncols();
    let dev = (&u * u.transpose() - &v * v.transpose()).norm();
    Ok(YoulaCheck {
        holds: dev <= 1e-8 * r as f64,
        deviation: dev,
    })
}

/// Identifiability diagnostics for a candidate pair (S̃, L̃).
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub mu: f64,
    pub mu_exact: bool,
    pub xi: f64,
    pub deg_max: usize,
    pub inc: f64,
    pub product_mu_xi: f64,
    pub product_deg_inc: f64,
    pub gamma_range_muxi: Option<(f64, f64)>,
    pub gamma_range_deg_inc: Option<(f64, f64)>,
    pub transverse: bool,
}

impl ConditionReport {
    pub fn analyze(s: &SkewMatrix, l: &SkewMatrix) -> Result<Self, Error> {
        let mu = mu_exact(s, MU_ENUM_CAP);
        let xi = xi_exact(l)?;
        let deg = deg_max(s);
        let inc = incoherence(l)?;
        let omega = SparseTangentSpace::from_matrix(s);
        let tspace = LowRankTangentSpace::from_matrix(l)?;
        let ix = transverse_intersection(&omega, &tspace)?;
        let gm = if mu.value > 0.0 && xi > 0.0 {
            gamma_range_muxi(mu.value, xi)?
        } else {
            None
        };
        let gd = if deg > 0 && inc > 0.0 {
            gamma_range_deg_inc(deg, inc)?
        } else {
            None
        };
        Ok(ConditionReport {
            mu: mu.value,
            mu_exact: mu.exact,
            xi,
            deg_max: deg,
            inc,
            product_mu_xi: mu.value * xi,
            product_deg_inc: deg as f64 * inc,
            gamma_range_muxi: gm,
            gamma_range_deg_inc: gd,
            transverse: ix.trivial,
        })
    }
}
