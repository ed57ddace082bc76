//! Scoring a reconstructed topology against the generating model: edge
//! precision/recall over the observed block and per-hidden-node neighbor
//! matching by Jaccard similarity (hidden labels are synthetic, so nodes are
//! paired greedily, one-to-one, by best overlap).

use std::collections::{BTreeMap, BTreeSet};

use ldm_sim::{derive_views, LdgModel};
use serde::Serialize;

use crate::error::Error;
use crate::recon::ReconstructedTopology;

#[derive(Debug, Clone, Serialize)]
pub struct HiddenMatch {
    /// Index of the reconstructed hidden node (component order).
    pub recon_index: usize,
    /// Original index of the matched true hidden node, when one was paired.
    pub matched_true: Option<usize>,
    /// Jaccard similarity of attached vs true neighbor sets.
    pub jaccard: f64,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metrics {
    pub observed_precision: f64,
    pub observed_recall: f64,
    pub hidden_count_true: usize,
    pub hidden_count_recon: usize,
    pub hidden_count_match: bool,
    pub per_hidden: Vec<HiddenMatch>,
    pub exact_match: bool,
}

fn ratio(hits: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        hits as f64 / total as f64
    }
}

fn jaccard(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        1.0
    } else {
        a.intersection(b).count() as f64 / union as f64
    }
}

/// Compares a reconstruction to the model that generated the data.
///
/// Observed edges are scored against the direct topology restricted to
/// observed nodes, or against the moral (kin) closure when `kin_mode` is set
/// — the sparse support recovers the kin graph for models whose phase
/// structure does not cancel spouse edges.
pub fn evaluate(
    recon: &ReconstructedTopology,
    truth: &LdgModel,
    kin_mode: bool,
) -> Result<Metrics, Error> {
    if recon.n_o != truth.n_o() {
        return Err(Error::Mismatch(format!(
            "reconstruction covers {} observed nodes but the model has {}",
            recon.n_o,
            truth.n_o()
        )));
    }
    let views = derive_views(truth);
    let observed = truth.observed();
    let block_of: BTreeMap<usize, usize> =
        observed.iter().enumerate().map(|(b, &orig)| (orig, b)).collect();

    let source = if kin_mode { &views.kin } else { &views.topology };
    let truth_edges: BTreeSet<(usize, usize)> = source
        .iter()
        .filter_map(|&(a, b)| match (block_of.get(&a), block_of.get(&b)) {
            (Some(&ba), Some(&bb)) => Some((ba.min(bb), ba.max(bb))),
            _ => None,
        })
        .collect();
    let tp = recon.observed_edges.intersection(&truth_edges).count();
    let observed_precision = ratio(tp, recon.observed_edges.len());
    let observed_recall = ratio(tp, truth_edges.len());

    // true hidden neighbor sets, in observed-block coordinates
    let hidden: Vec<usize> = truth.hidden().iter().copied().collect();
    let true_neighbors: Vec<BTreeSet<usize>> = hidden
        .iter()
        .map(|&h| {
            views.parents[h]
                .union(&views.children[h])
                .filter_map(|orig| block_of.get(orig).copied())
                .collect()
        })
        .collect();

    // greedy one-to-one pairing by best Jaccard
    let mut taken = vec![false; hidden.len()];
    let mut per_hidden: Vec<HiddenMatch> = Vec::with_capacity(recon.n_h);
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    for (l, attach) in recon.hidden_attachments.iter().enumerate() {
        for (t, nb) in true_neighbors.iter().enumerate() {
            pairs.push((l, t, jaccard(attach, nb)));
        }
    }
    pairs.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut matched_of = vec![None; recon.n_h];
    for (l, t, j) in pairs {
        if matched_of[l].is_none() && !taken[t] {
            matched_of[l] = Some((t, j));
            taken[t] = true;
        }
    }
    for (l, attach) in recon.hidden_attachments.iter().enumerate() {
        let (matched_true, jac, prec, rec) = match matched_of[l] {
            Some((t, j)) => {
                let hits = attach.intersection(&true_neighbors[t]).count();
                (Some(hidden[t]), j, ratio(hits, attach.len()), ratio(hits, true_neighbors[t].len()))
            }
            None => (None, 0.0, 0.0, 0.0),
        };
        per_hidden.push(HiddenMatch {
            recon_index: l,
            matched_true,
            jaccard: jac,
            precision: prec,
            recall: rec,
        });
    }

    let hidden_count_match = recon.n_h == hidden.len();
    let exact_match = recon.observed_edges == truth_edges
        && hidden_count_match
        && per_hidden.iter().all(|m| m.matched_true.is_some() && m.jaccard == 1.0);

    Ok(Metrics {
        observed_precision,
        observed_recall,
        hidden_count_true: hidden.len(),
        hidden_count_recon: recon.n_h,
        hidden_count_match,
        per_hidden,
        exact_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldm_sim::{Edge, NoiseSpec};

    fn model(n: usize, hidden: &[usize], edges: &[(usize, usize)]) -> LdgModel {
        LdgModel::new(
            n,
            edges
                .iter()
                .map(|&(a, b)| Edge { from: a, to: b, gain: 0.4, taps: None })
                .collect(),
            vec![vec![0.5]; n],
            vec![NoiseSpec::Variance(1.0); n],
            hidden.iter().copied().collect(),
        )
        .unwrap()
    }

    fn recon(
        n_o: usize,
        edges: &[(usize, usize)],
        attachments: &[&[usize]],
    ) -> ReconstructedTopology {
        ReconstructedTopology {
            n_o,
            n_h: attachments.len(),
            observed_edges: edges.iter().copied().collect(),
            hidden_attachments: attachments
                .iter()
                .map(|a| a.iter().copied().collect())
                .collect(),
            flagged: Vec::new(),
        }
    }

    #[test]
    fn perfect_reconstruction_scores_one() {
        // hidden node 4 with children 0,1,2; observed edge 2–3
        let m = model(5, &[4], &[(4, 0), (4, 1), (4, 2), (2, 3)]);
        let r = recon(4, &[(2, 3)], &[&[0, 1, 2]]);
        let met = evaluate(&r, &m, false).unwrap();
        assert_eq!(met.observed_precision, 1.0);
        assert_eq!(met.observed_recall, 1.0);
        assert!(met.hidden_count_match);
        assert_eq!(met.per_hidden[0].matched_true, Some(4));
        assert_eq!(met.per_hidden[0].jaccard, 1.0);
        assert!(met.exact_match);
    }

    #[test]
    fn missing_edge_hits_recall_not_precision() {
        let m = model(4, &[], &[(0, 1), (1, 2), (2, 3)]);
        let r = recon(4, &[(0, 1), (1, 2)], &[]);
        let met = evaluate(&r, &m, false).unwrap();
        assert_eq!(met.observed_precision, 1.0);
        assert!((met.observed_recall - 2.0 / 3.0).abs() < 1e-12);
        assert!(!met.exact_match);
    }

    #[test]
    fn hidden_count_mismatch_breaks_exact_match() {
        let m = model(4, &[3], &[(3, 0), (3, 1), (0, 2)]);
        let r = recon(3, &[(0, 2)], &[]);
        let met = evaluate(&r, &m, false).unwrap();
        assert_eq!(met.hidden_count_true, 1);
        assert_eq!(met.hidden_count_recon, 0);
        assert!(!met.hidden_count_match && !met.exact_match);
    }

    #[test]
    fn kin_mode_accepts_spouse_edges() {
        // collider 0→2←1 makes (0,1) a kin edge but not a direct one
        let m = model(3, &[], &[(0, 2), (1, 2)]);
        let r = recon(3, &[(0, 1), (0, 2), (1, 2)], &[]);
        let plain = evaluate(&r, &m, false).unwrap();
        let kin = evaluate(&r, &m, true).unwrap();
        assert!(plain.observed_precision < 1.0);
        assert_eq!(kin.observed_precision, 1.0);
        assert_eq!(kin.observed_recall, 1.0);
    }

    #[test]
    fn greedy_matching_pairs_best_blankets() {
        let m = model(6, &[4, 5], &[(4, 0), (4, 1), (5, 2), (5, 3)]);
        // components listed in the opposite order of the true hidden ids
        let r = recon(4, &[], &[&[2, 3], &[0, 1]]);
        let met = evaluate(&r, &m, false).unwrap();
        assert_eq!(met.per_hidden[0].matched_true, Some(5));
        assert_eq!(met.per_hidden[1].matched_true, Some(4));
        assert!(met.exact_match);
    }

    #[test]
    fn node_set_mismatch_is_an_error() {
        let m = model(3, &[], &[(0, 1)]);
        let r = recon(4, &[], &[]);
        assert!(evaluate(&r, &m, false).is_err());
    }
}
