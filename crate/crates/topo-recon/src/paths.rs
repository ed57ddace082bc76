//! Two-hop path structures through a hidden node that make an entry of the
//! low-rank part nonzero: the "direct" family (hidden node is a parent,
//! child-with-coparent, or shares a collider) and the strict-spouse family
//! (both observed nodes parent the hidden node, or a double collider).

use std::collections::BTreeSet;

use ldm_sim::LdgModel;

use crate::error::Error;

/// Which path family connects the observed pair through the hidden node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DmPathWitness {
    /// Some direct structure is present (the hidden node has an edge into or
    /// out of the pair beyond pure co-parenting).
    pub de: bool,
    /// A strict-spouse structure is present.
    pub ss: bool,
}

impl DmPathWitness {
    pub fn any(&self) -> bool {
        self.de || self.ss
    }
}

/// Checks every admissible two-hop structure between observed nodes `i` and
/// `j` through hidden node `h` against the model's directed edge set.
pub fn dm_path_exists(
    model: &LdgModel,
    i: usize,
    j: usize,
    h: usize,
) -> Result<DmPathWitness, Error> {
    let hidden = model.hidden();
    if i == j {
        return Err(Error::Parameter("path endpoints must differ".into()));
    }
    if hidden.contains(&i) || hidden.contains(&j) {
        return Err(Error::Parameter(format!("endpoints {i},{j} must be observed")));
    }
    if !hidden.contains(&h) {
        return Err(Error::Parameter(format!("node {h} is not hidden")));
    }
    let e: BTreeSet<(usize, usize)> =
        model.edges().iter().map(|edge| (edge.from, edge.to)).collect();
    let has = |a: usize, b: usize| e.contains(&(a, b));
    let others: Vec<usize> =
        model.observed().into_iter().filter(|&k| k != i && k != j).collect();

    let de = has(h, i) && has(h, j)                                     // both children
        || has(h, i) && has(j, h)                                        // chain j→h→i
        || others.iter().any(|&k| has(h, i) && has(h, k) && has(j, k))   // child + collider
        || has(i, h) && has(h, j)                                        // chain i→h→j
        || others.iter().any(|&k| has(i, h) && has(h, k) && has(j, k))
        || others.iter().any(|&k| has(i, k) && has(h, k) && has(j, h))
        || others.iter().any(|&k| has(i, k) && has(h, k) && has(h, j))
        || has(h, i) && has(j, i)                                        // co-parents of i
        || has(h, j) && has(i, j);                                       // co-parents of j
    let ss = has(i, h) && has(j, h)                                      // both parents
        || others.iter().any(|&k1| {
            others.iter().any(|&k2| {
                has(i, k1) && has(h, k1) && has(h, k2) && has(k2, j)
            })
        });
    Ok(DmPathWitness { de, ss })
}
