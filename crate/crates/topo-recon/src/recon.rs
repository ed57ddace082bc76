//! Topology reconstruction from a sparse + low-rank split of the imaginary
//! inverse spectrum: observed edges from the sparse support, hidden-node
//! count and attachments from the connected components of the low-rank
//! support, with a degree rule deciding which blanket nodes are true
//! neighbors of each hidden node.

use std::collections::{BTreeMap, BTreeSet};

use skewlr_decomp::SkewMatrix;

use crate::error::Error;

/// Default support threshold; intended for inputs scaled to unit max-entry so
/// the cut is scale-free.
pub const DEFAULT_TAU: f64 = 1e-6;

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Rescale a skew matrix to unit max-magnitude entry (no-op on zero input),
/// matching the normalization [`DEFAULT_TAU`] is calibrated for.
pub fn normalize_inf(m: &SkewMatrix) -> SkewMatrix {
    let norm = m.norm_inf();
    if norm > 0.0 {
        m.scale(1.0 / norm)
    } else {
        m.clone()
    }
}

/// Undirected edges {i, j} with |Ŝ_ij| above the threshold.
pub fn observable_edges(
    s_hat: &SkewMatrix,
    tau: f64,
) -> Result<BTreeSet<(usize, usize)>, Error> {
    if !(tau > 0.0) {
        return Err(Error::Parameter(format!("threshold must be positive, got {tau}")));
    }
    let m = s_hat.matrix();
    let n = s_hat.n();
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if m[(i, j)].abs() > tau {
                edges.insert((i, j));
            }
        }
    }
    Ok(edges)
}

/// One connected component of the low-rank support graph: the blanket of a
/// single hidden node together with its internal degree statistics.
#[derive(Debug, Clone)]
pub struct HiddenComponent {
    /// Blanket node set M.
    pub m: BTreeSet<usize>,
    /// Undirected support edges Q within M (pairs stored with i < j).
    pub q: BTreeSet<(usize, usize)>,
    /// Degree of each node of M inside Q.
    pub degrees: BTreeMap<usize, usize>,
    /// Maximum degree over M.
    pub alpha: usize,
    /// True when no node is degree-deficient; the hidden node then attaches
    /// to the whole component.
    pub attach_all: bool,
    /// Full-degree nodes (degree == alpha): certain neighbors of the hidden
    /// node.
    pub d_h: BTreeSet<usize>,
    /// Deficient nodes (degree < alpha): strict parents or strict spouses.
    pub m_tilde: BTreeSet<usize>,
}

impl HiddenComponent {
    fn from_support(m: BTreeSet<usize>, q: BTreeSet<(usize, usize)>) -> Self {
        let mut degrees: BTreeMap<usize, usize> = m.iter().map(|&i| (i, 0)).collect();
        for &(a, b) in &q {
            *degrees.get_mut(&a).unwrap() += 1;
            *degrees.get_mut(&b).unwrap() += 1;
        }
        let alpha = degrees.values().copied().max().unwrap_or(0);
        let d_h: BTreeSet<usize> =
            degrees.iter().filter(|&(_, &d)| d == alpha).map(|(&i, _)| i).collect();
        let m_tilde: BTreeSet<usize> =
            degrees.iter().filter(|&(_, &d)| d < alpha).map(|(&i, _)| i).collect();
        let attach_all = m_tilde.is_empty();
        HiddenComponent { m, q, degrees, alpha, attach_all, d_h, m_tilde }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri.max(rj)] = ri.min(rj);
        }
    }
}

/// Connected components of the support graph of L̂, ordered by smallest
/// member node. Each component is one hidden node's blanket.
pub fn hidden_components(
    l_hat: &SkewMatrix,
    tau: f64,
) -> Result<Vec<HiddenComponent>, Error> {
    if !(tau > 0.0) {
        return Err(Error::Parameter(format!("threshold must be positive, got {tau}")));
    }
    let m = l_hat.matrix();
    let n = l_hat.n();
    let mut edges = BTreeSet::new();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if m[(i, j)].abs() > tau {
                edges.insert((i, j));
                uf.union(i, j);
            }
        }
    }
    let mut by_root: BTreeMap<usize, (BTreeSet<usize>, BTreeSet<(usize, usize)>)> =
        BTreeMap::new();
    for &(i, j) in &edges {
        let root = uf.find(i);
        let entry = by_root.entry(root).or_default();
        entry.0.insert(i);
        entry.0.insert(j);
        entry.1.insert((i, j));
    }
    Ok(by_root.into_values().map(|(m, q)| HiddenComponent::from_support(m, q)).collect())
}

/// Observed nodes the hidden node of `comp` attaches to.
///
/// When no node is deficient the component is its hidden node's clique and
/// every member attaches. Otherwise the full-degree nodes attach, plus each
/// deficient node sharing no reconstructed observed edge with any full-degree
/// node (those are strict parents; deficient nodes adjacent to a full-degree
/// node are strict spouses and must not attach).
pub fn attach_hidden(
    comp: &HiddenComponent,
    e_r: &BTreeSet<(usize, usize)>,
) -> Result<BTreeSet<usize>, Error> {
    if comp.m.is_empty() {
        return Err(Error::Parameter("empty hidden component".into()));
    }
    if comp.attach_all {
        return Ok(comp.m.clone());
    }
    let mut attach = comp.d_h.clone();
    for &k in &comp.m_tilde {
        if comp.d_h.iter().all(|&d| !e_r.contains(&ordered(k, d))) {
            attach.insert(k);
        }
    }
    Ok(attach)
}

/// Reconstructed topology over the observed block plus fresh hidden nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructedTopology {
    /// Observed-block dimension; observed nodes are 0..n_o.
    pub n_o: usize,
    /// Hidden-node count (component count of the low-rank support).
    pub n_h: usize,
    /// Undirected observed-observed edges, pairs with i < j.
    pub observed_edges: BTreeSet<(usize, usize)>,
    /// Per hidden node (in component order): attached observed nodes.
    pub hidden_attachments: Vec<BTreeSet<usize>>,
    /// Degree-deficient attachments. Each is a true edge to a strict parent
    /// when every hidden node has zero or at least two strict spouses; a
    /// lone strict spouse would appear here as a single false edge.
    pub flagged: Vec<(usize, usize)>,
}

/// Full pipeline over one decomposition: observed edges from Ŝ, hidden
/// components and attachments from L̂.
pub fn full_topology(
    s_hat: &SkewMatrix,
    l_hat: &SkewMatrix,
    tau: f64,
) -> Result<ReconstructedTopology, Error> {
    if s_hat.n() != l_hat.n() {
        return Err(Error::Mismatch(format!(
            "sparse part is {0}×{0} but low-rank part is {1}×{1}",
            s_hat.n(),
            l_hat.n()
        )));
    }
    let observed_edges = observable_edges(s_hat, tau)?;
    let comps = hidden_components(l_hat, tau)?;
    let mut hidden_attachments = Vec::with_capacity(comps.len());
    let mut flagged = Vec::new();
    for (l, comp) in comps.iter().enumerate() {
        let attach = attach_hidden(comp, &observed_edges)?;
        for &k in attach.intersection(&comp.m_tilde) {
            flagged.push((l, k));
        }
        hidden_attachments.push(attach);
    }
    Ok(ReconstructedTopology {
        n_o: s_hat.n(),
        n_h: comps.len(),
        observed_edges,
        hidden_attachments,
        flagged,
    })
}

/// Majority vote over edge sets reconstructed at several frequencies: an edge
/// is kept when it appears in more than half of the sets.
pub fn majority_vote(sets: &[BTreeSet<(usize, usize)>]) -> BTreeSet<(usize, usize)> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for set in sets {
        for &e in set {
            *counts.entry(e).or_default() += 1;
        }
    }
    counts.into_iter().filter(|&(_, c)| 2 * c > sets.len()).map(|(e, _)| e).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn skew_from_pairs(n: usize, pairs: &[(usize, usize, f64)]) -> SkewMatrix {
        let mut m = DMatrix::zeros(n, n);
        for &(i, j, v) in pairs {
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        skewlr_decomp::project_skew(&m).unwrap()
    }

    #[test]
    fn zero_matrix_gives_no_edges_and_no_components() {
        let z = SkewMatrix::zeros(5);
        assert!(observable_edges(&z, DEFAULT_TAU).unwrap().is_empty());
        assert!(hidden_components(&z, DEFAULT_TAU).unwrap().is_empty());
    }

    #[test]
    fn edges_respect_threshold() {
        let s = skew_from_pairs(4, &[(0, 1, 0.5), (2, 3, 1e-8)]);
        let edges = observable_edges(&s, 1e-6).unwrap();
        assert_eq!(edges, [(0, 1)].into_iter().collect());
    }

    #[test]
    fn nonpositive_threshold_rejected() {
        let z = SkewMatrix::zeros(3);
        assert!(observable_edges(&z, 0.0).is_err());
        assert!(hidden_components(&z, -1.0).is_err());
    }

    #[test]
    fn normalization_makes_default_threshold_scale_free() {
        let s = skew_from_pairs(3, &[(0, 1, 1e-9), (1, 2, 5e-10)]);
        assert!(observable_edges(&s, DEFAULT_TAU).unwrap().is_empty());
        let edges = observable_edges(&normalize_inf(&s), DEFAULT_TAU).unwrap();
        assert_eq!(edges, [(0, 1), (1, 2)].into_iter().collect());
    }

    #[test]
    fn two_cliques_give_two_disjoint_components() {
        let l = skew_from_pairs(
            7,
            &[(0, 1, 0.3), (0, 2, 0.2), (1, 2, 0.4), (4, 5, 0.1), (5, 6, 0.2), (4, 6, 0.5)],
        );
        let comps = hidden_components(&l, DEFAULT_TAU).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].m, [0, 1, 2].into_iter().collect());
        assert_eq!(comps[1].m, [4, 5, 6].into_iter().collect());
        assert!(comps[0].m.is_disjoint(&comps[1].m));
        assert!(comps[0].q.is_disjoint(&comps[1].q));
        for c in &comps {
            assert_eq!(c.alpha, 2);
            assert!(c.attach_all);
            assert!(c.m_tilde.is_empty());
        }
    }

    #[test]
    fn degree_statistics_on_a_path_component() {
        // path 0–1–2: endpoints deficient
        let l = skew_from_pairs(3, &[(0, 1, 0.3), (1, 2, 0.2)]);
        let comps = hidden_components(&l, DEFAULT_TAU).unwrap();
        assert_eq!(comps.len(), 1);
        let c = &comps[0];
        assert_eq!(c.alpha, 2);
        assert!(!c.attach_all);
        assert_eq!(c.d_h, [1].into_iter().collect());
        assert_eq!(c.m_tilde, [0, 2].into_iter().collect());
        assert_eq!(c.degrees[&0], 1);
    }

    #[test]
    fn clique_component_attaches_everywhere() {
        let l = skew_from_pairs(3, &[(0, 1, 0.3), (0, 2, 0.2), (1, 2, 0.4)]);
        let comps = hidden_components(&l, DEFAULT_TAU).unwrap();
        let attach = attach_hidden(&comps[0], &BTreeSet::new()).unwrap();
        assert_eq!(attach, [0, 1, 2].into_iter().collect());
    }

    #[test]
    fn deficient_node_without_observed_link_attaches() {
        // star center 1 has full degree; leaves 0 and 2 are deficient and
        // share no observed edge with the center, so both attach (strict
        // parents).
        let l = skew_from_pairs(3, &[(0, 1, 0.3), (1, 2, 0.2)]);
        let comps = hidden_components(&l, DEFAULT_TAU).unwrap();
        let attach = attach_hidden(&comps[0], &BTreeSet::new()).unwrap();
        assert_eq!(attach, [0, 1, 2].into_iter().collect());
    }

    #[test]
    fn deficient_node_adjacent_to_full_degree_node_is_excluded() {
        // same support, but 0–1 is a reconstructed observed edge: 0 is a
        // strict spouse (adjacent to the full-degree node) and must not
        // attach, while 2 still does.
        let l = skew_from_pairs(3, &[(0, 1, 0.3), (1, 2, 0.2)]);
        let comps = hidden_components(&l, DEFAULT_TAU).unwrap();
        let e_r: BTreeSet<_> = [(0, 1)].into_iter().collect();
        let attach = attach_hidden(&comps[0], &e_r).unwrap();
        assert_eq!(attach, [1, 2].into_iter().collect());
    }

    #[test]
    fn full_topology_flags_deficient_attachments() {
        let s = skew_from_pairs(4, &[(0, 3, 0.5)]);
        let l = skew_from_pairs(4, &[(0, 1, 0.3), (1, 2, 0.2)]);
        let t = full_topology(&s, &l, DEFAULT_TAU).unwrap();
        assert_eq!(t.n_o, 4);
        assert_eq!(t.n_h, 1);
        assert_eq!(t.observed_edges, [(0, 3)].into_iter().collect());
        assert_eq!(t.hidden_attachments[0], [0, 1, 2].into_iter().collect());
        assert_eq!(t.flagged, vec![(0, 0), (0, 2)]);
    }

    #[test]
    fn full_topology_is_deterministic_and_checks_dims() {
        let s = skew_from_pairs(4, &[(0, 1, 0.5)]);
        let l = skew_from_pairs(4, &[(2, 3, 0.3)]);
        let a = full_topology(&s, &l, DEFAULT_TAU).unwrap();
        let b = full_topology(&s, &l, DEFAULT_TAU).unwrap();
        assert_eq!(a, b);
        let l5 = SkewMatrix::zeros(5);
        assert!(full_topology(&s, &l5, DEFAULT_TAU).is_err());
    }

    #[test]
    fn zero_low_rank_part_keeps_observed_topology_only() {
        let s = skew_from_pairs(3, &[(0, 1, 0.5), (1, 2, 0.4)]);
        let t = full_topology(&s, &SkewMatrix::zeros(3), DEFAULT_TAU).unwrap();
        assert_eq!(t.n_h, 0);
        assert!(t.hidden_attachments.is_empty());
        assert_eq!(t.observed_edges, [(0, 1), (1, 2)].into_iter().collect());
    }

    #[test]
    fn majority_vote_keeps_edges_on_most_frequencies() {
        let a: BTreeSet<_> = [(0, 1), (1, 2)].into_iter().collect();
        let b: BTreeSet<_> = [(0, 1)].into_iter().collect();
        let c: BTreeSet<_> = [(0, 1), (2, 3)].into_iter().collect();
        let voted = majority_vote(&[a, b, c]);
        assert_eq!(voted, [(0, 1)].into_iter().collect());
    }
}
