use nalgebra::{DMatrix, DVector};

use crate::conditions::spectral_norm;
use crate::error::Error;
use crate::skew::{project_skew, SkewMatrix};
use crate::tangent::{
    compact_svd, project_onto_t, transverse_intersection, unvectorize, vectorize,
    LowRankTangentSpace, SparseTangentSpace,
};

/// Dual certificate for a candidate decomposition `C = Ŝ + L̂` at penalty γ.
///
/// A valid certificate is a matrix Q with
///   P_Ω(Q) = γ·sign(Ŝ),   P_T(Q) = UVᵀ,
///   ‖P_{Ω^c}(Q)‖_∞ < γ,   ‖P_{T⊥}(Q)‖₂ < 1,
/// which proves (Ŝ, L̂) is the unique optimum of the convex program at γ.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub q: DMatrix<f64>,
    /// γ − ‖P_{Ω^c}(Q)‖_∞
    pub inf_margin: f64,
    /// 1 − ‖P_{T⊥}(Q)‖₂
    pub spec_margin: f64,
    pub support_match: bool,
    pub uv_match: bool,
    pub valid: bool,
    pub reason: Option<String>,
}

impl Certificate {
    fn invalid(n: usize, reason: &str) -> Self {
        Certificate {
            q: DMatrix::zeros(n, n),
            inf_margin: f64::NEG_INFINITY,
            spec_margin: f64::NEG_INFINITY,
            support_match: false,
            uv_match: false,
            valid: false,
            reason: Some(reason.to_string()),
        }
    }
}

/// Builds the unique dual candidate in Ω ⊕ T satisfying both equality
/// constraints (least-squares on the stacked orthonormal bases), then
/// evaluates the strict-inequality margins.
pub fn certify(
    c: &SkewMatrix,
    s_hat: &SkewMatrix,
    l_hat: &SkewMatrix,
    gamma: f64,
) -> Result<Certificate, Error> {
    let n = c.n();
    if s_hat.n() != n || l_hat.n() != n {
        return Err(Error::DimensionMismatch(s_hat.n(), n));
    }
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::Parameter(format!("gamma must be positive finite, got {gamma}")));
    }
    let norm_c = c.norm_fro().max(1e-300);
    let gap = (c.matrix() - s_hat.matrix() - l_hat.matrix()).norm();
    if gap > 1e-6 * norm_c {
        return Err(Error::Domain(format!(
            "S_hat + L_hat differs from C by {gap:.3e} (relative {:.3e})",
            gap / norm_c
        )));
    }
    if s_hat.is_zero(1e-12 * norm_c) || l_hat.is_zero(1e-12 * norm_c) {
        return Ok(Certificate::invalid(n, "degenerate component"));
    }

    let omega = SparseTangentSpace::from_matrix(s_hat);
    let tspace = LowRankTangentSpace::from_matrix(l_hat)?;
    let ix = transverse_intersection(&omega, &tspace)?;
    if !ix.trivial {
        return Ok(Certificate::invalid(n, "no unique dual"));
    }

    // Right-hand sides: sign target on Omega, polar factor UV^T on T.
    let scale = s_hat.norm_inf();
    let sign = s_hat.matrix().map(|v| {
        if v.abs() > 1e-9 * scale {
            v.signum()
        } else {
            0.0
        }
    });
    let (u, _, v) = compact_svd(l_hat)?;
    let uvt = project_skew(&(&u * v.transpose()))?;

    let a_om = omega.orthonormal_basis();
    let a_t = tspace.orthonormal_basis();
    let m = a_om.ncols();
    let p = a_t.ncols();

    let s_rhs = a_om.transpose() * vectorize(&(&sign * gamma));
    let u_rhs = a_t.transpose() * vectorize(uvt.matrix());

    // Normal equations of the two-block constraint system:
    // [ I  G ] [a]   [s]          with G = A_Ω ᵀ A_T
    // [ Gᵀ I ] [b] = [u]
    let g = a_om.transpose() * &a_t;
    let mut kkt = DMatrix::identity(m + p, m + p);
    kkt.view_mut((0, m), (m, p)).copy_from(&g);
    kkt.view_mut((m, 0), (p, m)).copy_from(&g.transpose());
    let mut rhs = DVector::zeros(m + p);
    rhs.rows_mut(0, m).copy_from(&s_rhs);
    rhs.rows_mut(m, p).copy_from(&u_rhs);

    let lu = kkt.lu();
    let ab = match lu.solve(&rhs) {
        Some(x) => x,
        None => return Ok(Certificate::invalid(n, "no unique dual")),
    };
    let q_vec = &a_om * ab.rows(0, m) + &a_t * ab.rows(m, p);
    let q = unvectorize(&q_vec.clone_owned(), n);

    // Verify the equality constraints actually hold (the KKT system can be
    // consistent yet badly conditioned).
    let q_skew = project_skew(&q)?;
    let p_omega_q = crate::tangent::project_onto_omega(&omega, &q)?;
    let support_res = (p_omega_q.matrix() - &sign * gamma).amax();
    let support_match = support_res <= 1e-7 * gamma.max(1.0);
    let p_t_q = project_onto_t(&tspace, q_skew.matrix())?;
    let uv_res = (&p_t_q - uvt.matrix()).norm();
    let uv_match = uv_res <= 1e-7;

    // Margins.
    let mut off_inf = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j && !omega.contains_pair(i, j) {
                off_inf = off_inf.max(q[(i, j)].abs());
            }
        }
    }
    let inf_margin = gamma - off_inf;
    let t_perp = q_skew.matrix() - &p_t_q;
    let spec_margin = 1.0 - spectral_norm(&t_perp);

    let valid = support_match && uv_match && inf_margin > 0.0 && spec_margin > 0.0;
    Ok(Certificate {
        q,
        inf_margin,
        spec_margin,
        support_match,
        uv_match,
        valid,
        reason: if valid {
            None
        } else if !support_match || !uv_match {
            Some("dual constraints unsatisfiable in Omega + T".to_string())
        } else {
            Some("margin violation".to_string())
        },
    })
}
