//! JSON export of estimate bundles; complex entries serialize as [re, im].

use std::path::Path;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type ComplexMatrixJson = Vec<Vec<[f64; 2]>>;

pub fn complex_matrix_to_json(m: &DMatrix<Complex<f64>>) -> ComplexMatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn complex_matrix_from_json(rows: &ComplexMatrixJson) -> Result<DMatrix<Complex<f64>>, Error> {
    let r = rows.len();
    if r == 0 {
        return Err(Error::Parse("empty matrix".into()));
    }
    let c = rows[0].len();
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse("ragged complex matrix".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| Complex::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Serialize, Deserialize)]
pub struct EstimateBundle {
    pub p: usize,
    #[serde(rename = "N")]
    pub n_samples: usize,
    /// Evaluation points as [re, im] on the unit circle.
    pub frequencies: Vec<[f64; 2]>,
    pub psdm: Vec<ComplexMatrixJson>,
    pub ipsdm: Vec<ComplexMatrixJson>,
}

impl EstimateBundle {
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let m = DMatrix::from_fn(2, 3, |i, j| Complex::new(i as f64, j as f64 - 1.0));
        let back = complex_matrix_from_json(&complex_matrix_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn bundle_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bundle.json");
        let m = DMatrix::from_element(2, 2, Complex::new(1.0, -0.5));
        let bundle = EstimateBundle {
            p: 3,
            n_samples: 1000,
            frequencies: vec![[1.0, 0.0]],
            psdm: vec![complex_matrix_to_json(&m)],
            ipsdm: vec![complex_matrix_to_json(&m)],
        };
        bundle.save(&path).unwrap();
        let back = EstimateBundle::load(&path).unwrap();
        assert_eq!(back.p, 3);
        assert_eq!(back.n_samples, 1000);
        assert_eq!(complex_matrix_from_json(&back.psdm[0]).unwrap(), m);
    }
}
