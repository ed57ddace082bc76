use nalgebra::DMatrix;

use crate::error::Error;

/// Dense real skew-symmetric matrix.
///
/// The invariant `entries[i][j] == -entries[j][i]` (and exact zero diagonal)
/// holds for every constructed value: constructors antisymmetrize their input,
/// so arithmetic drift cannot leak through.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    mat: DMatrix<f64>,
}

/// Canonical antisymmetrizer: `(M − Mᵀ)/2` with the diagonal forced to zero.
/// Idempotent on skew input.
pub fn project_skew(m: &DMatrix<f64>) -> Result<SkewMatrix, Error> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(SkewMatrix::antisymmetrize(m))
}

impl SkewMatrix {
    fn antisymmetrize(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (m[(i, j)] - m[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = -v;
            }
        }
        SkewMatrix { mat: out }
    }

    pub fn zeros(n: usize) -> Self {
        SkewMatrix {
            mat: DMatrix::zeros(n, n),
        }
    }

    /// Accepts a matrix that is already skew-symmetric within `tol`
    /// (relative to its largest entry); rejects anything else.
    pub fn try_from_matrix(m: DMatrix<f64>, tol: f64) -> Result<Self, Error> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let scale = m.amax().max(1.0);
        let mut dev: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                dev = dev.max((m[(i, j)] + m[(j, i)]).abs());
            }
        }
        if dev > tol * scale {
            return Err(Error::NotSkew(dev));
        }
        Ok(Self::antisymmetrize(&m))
    }

    /// Builds from the strict upper triangle of `m`; lower triangle ignored.
    pub fn from_upper(m: &DMatrix<f64>) -> Result<Self, Error> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let n = m.nrows();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                out[(i, j)] = m[(i, j)];
                out[(j, i)] = -m[(i, j)];
            }
        }
        Ok(SkewMatrix { mat: out })
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn norm_fro(&self) -> f64 {
        self.mat.norm()
    }

    pub fn norm_inf(&self) -> f64 {
        self.mat.amax()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.mat.amax() <= tol
    }

    pub fn scale(&self, alpha: f64) -> Self {
        SkewMatrix {
            mat: &self.mat * alpha,
        }
    }
}

impl std::ops::Index<(usize, usize)> for SkewMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.mat[idx]
    }
}
