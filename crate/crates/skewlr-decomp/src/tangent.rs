use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::skew::{project_skew, SkewMatrix};

/// Relative threshold under which an entry counts as structurally zero.
/// Applied to inputs normalized by their largest entry.
pub(crate) const SUPPORT_TOL: f64 = 1e-9;

/// Relative singular-value cutoff for numerical rank.
pub(crate) const RANK_TOL: f64 = 1e-8;

/// Tangent space Ω(S̃) of the sparse variety at S̃: all skew matrices with
/// support contained in support(S̃). Dimension = number of unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseTangentSpace {
    n: usize,
    support: BTreeSet<(usize, usize)>,
}

impl SparseTangentSpace {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, Error> {
        let mut support = BTreeSet::new();
        for (i, j) in pairs {
            if i == j || i >= n || j >= n {
                return Err(Error::Parameter(format!(
                    "invalid support pair ({i},{j}) for n={n}"
                )));
            }
            support.insert((i.min(j), i.max(j)));
        }
        Ok(SparseTangentSpace { n, support })
    }

    /// Support extracted at the standard relative threshold.
    pub fn from_matrix(s: &SkewMatrix) -> Self {
        let n = s.n();
        let scale = s.norm_inf();
        let mut support = BTreeSet::new();
        if scale > 0.0 {
            for i in 0..n {
                for j in (i + 1)..n {
                    if s[(i, j)].abs() > SUPPORT_TOL * scale {
                        support.insert((i, j));
                    }
                }
            }
        }
        SparseTangentSpace { n, support }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &BTreeSet<(usize, usize)> {
        &self.support
    }

    pub fn contains_pair(&self, i: usize, j: usize) -> bool {
        self.support.contains(&(i.min(j), i.max(j)))
    }

    /// Orthonormal basis, one vectorized `B_ij/√2 = (E_ij − E_ji)/√2` per pair.
    pub fn orthonormal_basis(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut basis = DMatrix::zeros(n * n, self.support.len());
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for (k, &(i, j)) in self.support.iter().enumerate() {
            basis[(j * n + i, k)] = inv_sqrt2;
            basis[(i * n + j, k)] = -inv_sqrt2;
        }
        basis
    }
}

/// Tangent space T(L̃) of the rank variety at a skew L̃ of even rank r:
/// `{UXᵀ − XUᵀ : X ∈ ℝ^{n×r}}` where U spans the column space. Its dimension
/// is `n·r − r(r+1)/2`: writing X = UA + U⊥B, the map X ↦ UXᵀ − XUᵀ kills
/// exactly the symmetric part of A. (At r = n this recovers the full skew
/// space, dimension n(n−1)/2.)
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankTangentSpace {
    n: usize,
    r: usize,
    u: DMatrix<f64>,
}

/// Compact SVD factors of a skew matrix at numerical-rank tolerance, with the
/// rank rounded up to even (skew singular values pair up) and a deterministic
/// sign convention: the first nonzero entry of each left singular vector is
/// positive.
pub(crate) fn compact_svd(l: &SkewMatrix) -> Result<(DMatrix<f64>, DVector<f64>, DMatrix<f64>), Error> {
    let svd = l
        .matrix()
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let sv = &svd.singular_values;
    let sigma1 = sv.max();
    if sigma1 <= 0.0 {
        return Err(Error::Domain("zero matrix has no compact SVD".into()));
    }
    let mut r = sv.iter().filter(|&&s| s > RANK_TOL * sigma1).count();
    if r % 2 == 1 {
        r += 1; // skew spectra pair up; keep the partner of a borderline value
    }
    let r = r.min(l.n());
    let u_full = svd.u.as_ref().expect("u requested");
    let vt_full = svd.v_t.as_ref().expect("v_t requested");
    let mut u = u_full.columns(0, r).into_owned();
    let mut v = vt_full.rows(0, r).transpose();
    for k in 0..r {
        let lead = u.column(k).iter().find(|x| x.abs() > 1e-12).copied();
        if let Some(x) = lead {
            if x < 0.0 {
                let mut cu = u.column_mut(k);
                cu.neg_mut();
                let mut cv = v.column_mut(k);
                cv.neg_mut();
            }
        }
    }
    let sigma = DVector::from_fn(r, |k, _| sv[k]);
    Ok((u, sigma, v))
}

impl LowRankTangentSpace {
    pub fn new(u: DMatrix<f64>) -> Result<Self, Error> {
        let (n, r) = (u.nrows(), u.ncols());
        if r == 0 || r % 2 != 0 {
            return Err(Error::Parameter(format!("rank must be even positive, got {r}")));
        }
        let gram = u.transpose() * &u;
        if (&gram - DMatrix::identity(r, r)).amax() > 1e-10 {
            return Err(Error::Parameter("U columns must be orthonormal".into()));
        }
        Ok(LowRankTangentSpace { n, r, u })
    }

    pub fn from_matrix(l: &SkewMatrix) -> Result<Self, Error> {
        let (u, _, _) = compact_svd(l)?;
        LowRankTangentSpace::new(u)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.n * self.r - (self.r * self.r + self.r) / 2
    }

    /// Orthonormal basis of T built by Gram–Schmidt over the n·r generators
    /// `u_k e_iᵀ − e_i u_kᵀ`; exactly `r(r+1)/2` of them are redundant.
    pub fn orthonormal_basis(&self) -> DMatrix<f64> {
        let n = self.n;
        let dim = self.dim();
        let mut basis = DMatrix::zeros(n * n, dim);
        let mut count = 0;
        for k in 0..self.r {
            for i in 0..n {
                let mut gen = DMatrix::zeros(n, n);
                let uk = self.u.column(k);
                for row in 0..n {
                    gen[(row, i)] += uk[row];
                    gen[(i, row)] -= uk[row];
                }
                let mut v = vectorize(&gen);
                // two rounds of classical Gram-Schmidt for numerical stability
                for _ in 0..2 {
                    for c in 0..count {
                        let col = basis.column(c);
                        let proj = col.dot(&v);
                        v -= proj * DVector::from(col.into_owned());
                    }
                }
                let norm = v.norm();
                if norm > 1e-10 {
                    v /= norm;
                    basis.set_column(count, &v);
                    count += 1;
                }
            }
        }
        debug_assert_eq!(count, dim, "tangent basis dimension mismatch");
        basis.columns(0, count).into_owned()
    }
}

pub(crate) fn vectorize(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

pub(crate) fn unvectorize(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// Orthogonal projection onto T(L̃): `P_U M + M P_U − P_U M P_U` with
/// `P_U = UUᵀ`. Skew input yields skew output.
pub fn project_onto_t(space: &LowRankTangentSpace, m: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    if m.nrows() != space.n() || m.ncols() != space.n() {
        return Err(Error::DimensionMismatch(m.nrows(), space.n()));
    }
    let u = space.u();
    let utm = u.transpose() * m; // r x n
    let pum = u * &utm; // P_U M
    let mpu = (m * u) * u.transpose(); // M P_U
    let pumpu = (&pum * u) * u.transpose(); // P_U M P_U
    Ok(pum + mpu - pumpu)
}

/// Orthogonal projection onto Ω(S̃): antisymmetrize, then zero all entries
/// outside the support.
pub fn project_onto_omega(space: &SparseTangentSpace, m: &DMatrix<f64>) -> Result<SkewMatrix, Error> {
    if m.nrows() != space.n() || m.ncols() != space.n() {
        return Err(Error::DimensionMismatch(m.nrows(), space.n()));
    }
    let skew = project_skew(m)?;
    let n = space.n();
    let mut out = DMatrix::zeros(n, n);
    for &(i, j) in space.support() {
        out[(i, j)] = skew[(i, j)];
        out[(j, i)] = skew[(j, i)];
    }
    project_skew(&out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Intersection {
    pub trivial: bool,
    pub intersection_dim: usize,
}

/// Tests Ω ∩ T = {0} by stacking explicit orthonormal bases and comparing
/// dim(Ω) + dim(T) against the rank of the concatenation.
pub fn transverse_intersection(
    omega: &SparseTangentSpace,
    tspace: &LowRankTangentSpace,
) -> Result<Intersection, Error> {
    if omega.n() != tspace.n() {
        return Err(Error::DimensionMismatch(omega.n(), tspace.n()));
    }
    let a = omega.orthonormal_basis();
    let b = tspace.orthonormal_basis();
    let total = a.ncols() + b.ncols();
    if a.ncols() == 0 {
        return Ok(Intersection { trivial: true, intersection_dim: 0 });
    }
    let mut stacked = DMatrix::zeros(a.nrows(), total);
    stacked.columns_mut(0, a.ncols()).copy_from(&a);
    stacked.columns_mut(a.ncols(), b.ncols()).copy_from(&b);
    let svd = stacked
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let sigma1 = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL * sigma1)
        .count();
    let intersection_dim = total - rank;
    Ok(Intersection {
        trivial: intersection_dim == 0,
        intersection_dim,
    })
}
