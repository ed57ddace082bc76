//! Graph views of a model: topology, moral (kin) graph, strict-spouse edges,
//! and hop distances on the undirected topology.

use std::collections::{BTreeSet, VecDeque};

use crate::model::LdgModel;

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

#[derive(Debug, Clone)]
pub struct GraphViews {
    pub parents: Vec<BTreeSet<usize>>,
    pub children: Vec<BTreeSet<usize>>,
    /// Spouses: co-parents of a common child (includes the node's own
    /// parents/children when they co-parent).
    pub spouses: Vec<BTreeSet<usize>>,
    /// Undirected edges {i,j} with a directed edge in either orientation.
    pub topology: BTreeSet<(usize, usize)>,
    /// topology ∪ spouse edges.
    pub kin: BTreeSet<(usize, usize)>,
    /// Spouse pairs with no direct edge in either orientation.
    pub strict_spouse_edges: BTreeSet<(usize, usize)>,
}

pub fn derive_views(model: &LdgModel) -> GraphViews {
    let n = model.n();
    let mut parents = vec![BTreeSet::new(); n];
    let mut children = vec![BTreeSet::new(); n];
    for e in model.edges() {
        parents[e.to].insert(e.from);
        children[e.from].insert(e.to);
    }
    let mut spouses = vec![BTreeSet::new(); n];
    for k in 0..n {
        for &c in &children[k] {
            for &p in &parents[c] {
                if p != k {
                    spouses[k].insert(p);
                }
            }
        }
    }
    let mut topology = BTreeSet::new();
    for e in model.edges() {
        topology.insert(ordered(e.from, e.to));
    }
    let mut kin = topology.clone();
    let mut strict_spouse_edges = BTreeSet::new();
    for i in 0..n {
        for &j in &spouses[i] {
            let pair = ordered(i, j);
            kin.insert(pair);
            if !topology.contains(&pair) {
                strict_spouse_edges.insert(pair);
            }
        }
    }
    GraphViews { parents, children, spouses, topology, kin, strict_spouse_edges }
}

impl GraphViews {
    /// Markov blanket of a node: parents ∪ children ∪ spouses.
    pub fn blanket(&self, k: usize) -> BTreeSet<usize> {
        let mut b = self.parents[k].clone();
        b.extend(&self.children[k]);
        b.extend(&self.spouses[k]);
        b
    }

    pub fn is_strict_spouse_pair(&self, i: usize, j: usize) -> bool {
        self.strict_spouse_edges.contains(&ordered(i, j))
    }

    /// Shortest-path hop count between i and j on the undirected topology;
    /// None when disconnected.
    pub fn d_hop(&self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return Some(0);
        }
        let n = self.parents.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.topology {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut dist = vec![usize::MAX; n];
        dist[i] = 0;
        let mut queue = VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    if w == j {
                        return Some(dist[w]);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }
}
