//! Linear dynamical graph models: x(z) = H(z)x(z) + e(z) with per-node FIR
//! filters, positive noise spectra, and an optional hidden-node subset.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Frequency grid used for all numerical admissibility checks.
pub const GRID_SIZE: usize = 512;
/// Minimum |det(I − H(z))| over the grid for a well-posed model.
pub const WELL_POSED_TOL: f64 = 1e-6;
/// Minimum noise power over the grid for topological detectability.
pub const DETECT_TOL: f64 = 1e-6;

/// Directed edge i → j carried by H_{ji}(z). In the default (phase-aligned)
/// mode the response is gain·f_j(z) with f_j the target node's shared filter;
/// explicit `taps` (coefficients of z⁻¹, z⁻², …) override that and break the
/// phase alignment deliberately.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub gain: f64,
    pub taps: Option<Vec<f64>>,
}

/// Per-node noise spectrum: either a flat variance or the squared magnitude
/// of an FIR shaping filter (taps are coefficients of z⁰, z⁻¹, …).
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    Variance(f64),
    Fir(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct LdgModel {
    n: usize,
    edges: Vec<Edge>,
    /// f_k(z) = Σ_l taps[l]·z^{−(l+1)}; every filter is strictly causal so the
    /// time-domain recursion is explicit.
    node_filters: Vec<Vec<f64>>,
    noise: Vec<NoiseSpec>,
    hidden: BTreeSet<usize>,
}

pub fn unit_circle_check(z: Complex<f64>) -> Result<(), Error> {
    let r = z.norm();
    if (r - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitCircle(r));
    }
    Ok(())
}

/// The standard evaluation grid e^{j2πk/N}, N = GRID_SIZE.
pub fn frequency_grid() -> Vec<Complex<f64>> {
    (0..GRID_SIZE)
        .map(|k| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / GRID_SIZE as f64))
        .collect()
}

fn eval_strict_causal(taps: &[f64], z: Complex<f64>) -> Complex<f64> {
    // Σ taps[l]·z^{−(l+1)}, Horner from the tail
    let zinv = z.inv();
    taps.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &t| (acc + t) * zinv)
}

fn eval_causal(taps: &[f64], z: Complex<f64>) -> Complex<f64> {
    let zinv = z.inv();
    taps.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &t| acc * zinv + t)
}

impl NoiseSpec {
    /// Power spectrum at z (real and nonnegative by construction).
    pub fn psd(&self, z: Complex<f64>) -> f64 {
        match self {
            NoiseSpec::Variance(v) => *v,
            NoiseSpec::Fir(taps) => eval_causal(taps, z).norm_sqr(),
        }
    }
}

impl LdgModel {
    pub fn new(
        n: usize,
        edges: Vec<Edge>,
        node_filters: Vec<Vec<f64>>,
        noise: Vec<NoiseSpec>,
        hidden: BTreeSet<usize>,
    ) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Parameter("empty model".into()));
        }
        if node_filters.len() != n {
            return Err(Error::Model(format!(
                "expected {n} node filters, got {}",
                node_filters.len()
            )));
        }
        if noise.len() != n {
            return Err(Error::Model(format!("expected {n} noise specs, got {}", noise.len())));
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.from >= n || e.to >= n {
                return Err(Error::Model(format!("edge ({},{}) out of range", e.from, e.to)));
            }
            if e.from == e.to {
                return Err(Error::Model(format!("self-loop at node {}", e.from)));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::Model(format!("duplicate edge ({},{})", e.from, e.to)));
            }
            if e.taps.is_none() && !(e.gain > 0.0) {
                return Err(Error::Model(format!(
                    "edge ({},{}) needs a positive gain",
                    e.from, e.to
                )));
            }
        }
        for h in &hidden {
            if *h >= n {
                return Err(Error::Model(format!("hidden node {h} out of range")));
            }
        }
        if hidden.len() >= n {
            return Err(Error::Model("at least one node must be observed".into()));
        }
        let model = LdgModel { n, edges, node_filters, noise, hidden };

        for z in frequency_grid() {
            let h = model.eval_h(z)?;
            let det = (DMatrix::identity(n, n) - h).determinant().norm();
            if det <= WELL_POSED_TOL {
                return Err(Error::Model(format!(
                    "not well-posed: |det(I−H)| = {det:.3e} at z = {z}"
                )));
            }
            for k in 0..n {
                let p = model.noise[k].psd(z);
                if p <= DETECT_TOL {
                    return Err(Error::Model(format!(
                        "not topologically detectable: noise power {p:.3e} at node {k}, z = {z}"
                    )));
                }
            }
        }
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_o(&self) -> usize {
        self.n - self.hidden.len()
    }

    pub fn n_h(&self) -> usize {
        self.hidden.len()
    }

    pub fn hidden(&self) -> &BTreeSet<usize> {
        &self.hidden
    }

    /// Observed node ids in increasing order; this ordering indexes every
    /// observed-block matrix.
    pub fn observed(&self) -> Vec<usize> {
        (0..self.n).filter(|k| !self.hidden.contains(k)).collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_filters(&self) -> &[Vec<f64>] {
        &self.node_filters
    }

    pub fn noise(&self) -> &[NoiseSpec] {
        &self.noise
    }

    /// Longest filter memory (in lags) over node filters and explicit edge taps.
    pub fn order(&self) -> usize {
        let nf = self.node_filters.iter().map(|t| t.len()).max().unwrap_or(0);
        let ef = self
            .edges
            .iter()
            .filter_map(|e| e.taps.as_ref().map(|t| t.len()))
            .max()
            .unwrap_or(0);
        nf.max(ef)
    }

    /// Frequency response of edge i → j at z.
    pub fn edge_response(&self, e: &Edge, z: Complex<f64>) -> Complex<f64> {
        match &e.taps {
            Some(taps) => eval_strict_causal(taps, z),
            None => eval_strict_causal(&self.node_filters[e.to], z) * e.gain,
        }
    }

    /// H(z): H[j][i] carries the edge i → j; zero diagonal.
    pub fn eval_h(&self, z: Complex<f64>) -> Result<DMatrix<Complex<f64>>, Error> {
        unit_circle_check(z)?;
        let mut h = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            h[(e.to, e.from)] = self.edge_response(e, z);
        }
        Ok(h)
    }

    /// Real matrix of lag-l coefficients: x(k) = Σ_l coeff(l)·x(k−l) + e(k).
    pub fn lag_coefficients(&self) -> Vec<DMatrix<f64>> {
        let p = self.order();
        let mut coeffs = vec![DMatrix::zeros(self.n, self.n); p];
        for e in &self.edges {
            let taps: &[f64] = match &e.taps {
                Some(t) => t,
                None => &self.node_filters[e.to],
            };
            let scale = if e.taps.is_some() { 1.0 } else { e.gain };
            for (l, t) in taps.iter().enumerate() {
                coeffs[l][(e.to, e.from)] += scale * t;
            }
        }
        coeffs
    }

    /// Diagonal of Φ_e(z).
    pub fn noise_psd_diag(&self, z: Complex<f64>) -> Result<Vec<f64>, Error> {
        unit_circle_check(z)?;
        Ok(self.noise.iter().map(|s| s.psd(z)).collect())
    }
}

// ---------------------------------------------------------------------------
// JSON serialization

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    gain: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    taps: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct FilterJson {
    node: usize,
    taps: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct NoiseJson {
    node: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    taps: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    nodes: usize,
    edges: Vec<EdgeJson>,
    node_filters: Vec<FilterJson>,
    noise: Vec<NoiseJson>,
    hidden: Vec<usize>,
}

impl LdgModel {
    pub fn to_json(&self) -> Result<String, Error> {
        let doc = ModelJson {
            nodes: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { from: e.from, to: e.to, gain: e.gain, taps: e.taps.clone() })
                .collect(),
            node_filters: self
                .node_filters
                .iter()
                .enumerate()
                .map(|(k, taps)| FilterJson { node: k, taps: taps.clone() })
                .collect(),
            noise: self
                .noise
                .iter()
                .enumerate()
                .map(|(k, s)| match s {
                    NoiseSpec::Variance(v) => {
                        NoiseJson { node: k, variance: Some(*v), taps: None }
                    }
                    NoiseSpec::Fir(t) => NoiseJson { node: k, variance: None, taps: Some(t.clone()) },
                })
                .collect(),
            hidden: self.hidden.iter().copied().collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let doc: ModelJson = serde_json::from_str(text)?;
        let n = doc.nodes;
        let mut filters: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for f in doc.node_filters {
            filters.insert(f.node, f.taps);
        }
        let node_filters: Vec<Vec<f64>> =
            (0..n).map(|k| filters.get(&k).cloned().unwrap_or_default()).collect();
        let mut noise_map: BTreeMap<usize, NoiseSpec> = BTreeMap::new();
        for s in doc.noise {
            let spec = match (s.variance, s.taps) {
                (Some(v), None) => NoiseSpec::Variance(v),
                (None, Some(t)) => NoiseSpec::Fir(t),
                _ => {
                    return Err(Error::Parse(format!(
                        "noise for node {} needs exactly one of variance/taps",
                        s.node
                    )))
                }
            };
            noise_map.insert(s.node, spec);
        }
        let noise: Vec<NoiseSpec> = (0..n)
            .map(|k| noise_map.get(&k).cloned().unwrap_or(NoiseSpec::Variance(1.0)))
            .collect();
        let edges = doc
            .edges
            .into_iter()
            .map(|e| Edge { from: e.from, to: e.to, gain: e.gain, taps: e.taps })
            .collect();
        LdgModel::new(n, edges, node_filters, noise, doc.hidden.into_iter().collect())
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), Error> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self, Error> {
        LdgModel::from_json(&std::fs::read_to_string(path)?)
    }
}
