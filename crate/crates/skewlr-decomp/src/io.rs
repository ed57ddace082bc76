//! Matrix and sweep-curve serialization: CSV (row-major, round-trip-safe
//! 17-significant-digit floats) and JSON.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::skew::SkewMatrix;
use crate::sweep::SweepResult;

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_matrix_csv(path: &Path, m: &DMatrix<f64>) -> Result<(), Error> {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_float(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_matrix_csv(path: &Path) -> Result<DMatrix<f64>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!("ragged row at line {}", lineno + 1)));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix file".into()));
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<f64>>,
}

pub fn write_matrix_json(path: &Path, m: &DMatrix<f64>) -> Result<(), Error> {
    let doc = MatrixJson {
        n: m.nrows(),
        entries: (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

pub fn read_matrix_json(path: &Path) -> Result<DMatrix<f64>, Error> {
    let doc: MatrixJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if doc.entries.len() != doc.n || doc.entries.iter().any(|r| r.len() != doc.n) {
        return Err(Error::Parse("entries shape disagrees with n".into()));
    }
    Ok(DMatrix::from_fn(doc.n, doc.n, |i, j| doc.entries[i][j]))
}

pub fn read_skew_csv(path: &Path) -> Result<SkewMatrix, Error> {
    SkewMatrix::try_from_matrix(read_matrix_csv(path)?, 1e-9)
}

pub fn read_skew_json(path: &Path) -> Result<SkewMatrix, Error> {
    SkewMatrix::try_from_matrix(read_matrix_json(path)?, 1e-9)
}

/// Sweep curve as CSV `t,diff_t,tol_t` (blank fields where undefined).
pub fn write_sweep_csv(path: &Path, sweep: &SweepResult) -> Result<(), Error> {
    let mut out = String::from("t,diff_t,tol_t\n");
    for p in &sweep.points {
        let diff = p.diff.map(format_float).unwrap_or_default();
        let tol = p.tol.map(format_float).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", format_float(p.t), diff, tol));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
pub struct SweepSummary {
    pub epsilon: f64,
    pub zero_regions: Vec<(f64, f64)>,
    pub selected_t: Option<f64>,
    pub selected_certified: bool,
}

pub fn write_sweep_summary(path: &Path, sweep: &SweepResult) -> Result<(), Error> {
    let doc = SweepSummary {
        epsilon: sweep.epsilon,
        zero_regions: sweep.zero_regions.clone(),
        selected_t: sweep.selected_t,
        selected_certified: sweep.selected_certified,
    };
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}
