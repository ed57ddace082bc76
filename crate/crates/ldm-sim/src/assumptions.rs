//! Structural admissibility checks used by topology reconstruction: hidden
//! nodes must be identifiable, edge responses must carry a nonvanishing
//! imaginary part, and incoming edges must be phase-aligned.

use serde::Serialize;

use crate::graph::derive_views;
use crate::model::{frequency_grid, LdgModel};

const IM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witnesses: Vec<String>,
}

impl Check {
    fn from_witnesses(witnesses: Vec<String>) -> Self {
        Check { holds: witnesses.is_empty(), witnesses }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    /// Every hidden node has an observed child and a second observed
    /// parent-or-child neighbor.
    pub hidden_child: Check,
    /// Distinct hidden nodes sit more than 4 hops apart on the topology.
    pub hidden_spacing: Check,
    /// Edge responses have nonzero imaginary part at every non-real grid point.
    pub nonreal_response: Check,
    /// All incoming edges of a node share a common phase on the grid.
    pub phase_alignment: Check,
    /// A hidden node with a strict spouse has at least two of them.
    pub spouse_pairing: Check,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.hidden_child.holds
            && self.hidden_spacing.holds
            && self.nonreal_response.holds
            && self.phase_alignment.holds
            && self.spouse_pairing.holds
    }

    pub fn holds_for(&self, flags: &EnforceFlags) -> bool {
        (!flags.hidden_child || self.hidden_child.holds)
            && (!flags.hidden_spacing || self.hidden_spacing.holds)
            && (!flags.nonreal_response || self.nonreal_response.holds)
            && (!flags.phase_alignment || self.phase_alignment.holds)
            && (!flags.spouse_pairing || self.spouse_pairing.holds)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnforceFlags {
    pub hidden_child: bool,
    pub hidden_spacing: bool,
    pub nonreal_response: bool,
    pub phase_alignment: bool,
    pub spouse_pairing: bool,
}

impl Default for EnforceFlags {
    fn default() -> Self {
        EnforceFlags {
            hidden_child: true,
            hidden_spacing: true,
            nonreal_response: true,
            phase_alignment: true,
            spouse_pairing: true,
        }
    }
}

pub fn check_assumptions(model: &LdgModel) -> AssumptionReport {
    let views = derive_views(model);
    let hidden: Vec<usize> = model.hidden().iter().copied().collect();
    let is_observed = |k: usize| !model.hidden().contains(&k);

    let mut w_child = Vec::new();
    for &h in &hidden {
        let obs_children: Vec<usize> =
            views.children[h].iter().copied().filter(|&c| is_observed(c)).collect();
        if obs_children.is_empty() {
            w_child.push(format!("hidden node {h} has no observed child"));
            continue;
        }
        let c0 = obs_children[0];
        let has_other = views.children[h]
            .iter()
            .chain(views.parents[h].iter())
            .any(|&j| is_observed(j) && j != c0);
        if !has_other {
            w_child.push(format!(
                "hidden node {h} has no observed parent/child besides {c0}"
            ));
        }
    }

    let mut w_spacing = Vec::new();
    for (a, &h1) in hidden.iter().enumerate() {
        for &h2 in &hidden[a + 1..] {
            if let Some(d) = views.d_hop(h1, h2) {
                if d <= 4 {
                    w_spacing.push(format!("hidden nodes {h1},{h2} are {d} hops apart"));
                }
            }
        }
    }

    // z = ±1 carries no imaginary part for real taps and is excluded.
    let grid: Vec<_> = frequency_grid().into_iter().filter(|z| z.im.abs() > 1e-12).collect();

    let mut w_imag = Vec::new();
    for e in model.edges() {
        for &z in &grid {
            let h = model.edge_response(e, z);
            if h.im.abs() <= IM_TOL {
                w_imag.push(format!(
                    "edge {}->{} has Im response {:.2e} at z = {z}",
                    e.from, e.to, h.im
                ));
                break;
            }
        }
    }

    let mut w_phase = Vec::new();
    'node: for k in 0..model.n() {
        let incoming: Vec<_> = model.edges().iter().filter(|e| e.to == k).collect();
        if incoming.len() < 2 {
            continue;
        }
        for &z in &grid {
            let responses: Vec<_> = incoming.iter().map(|e| model.edge_response(e, z)).collect();
            let reference = match responses.iter().find(|h| h.norm() > 1e-12) {
                Some(r) => *r,
                None => continue,
            };
            for (e, h) in incoming.iter().zip(&responses) {
                let cross = (h * reference.conj()).im;
                if cross.abs() > 1e-9 * (h.norm() * reference.norm()).max(1e-300) {
                    w_phase.push(format!(
                        "edges into node {k} have misaligned phases (offender {}->{k} at z = {z})",
                        e.from
                    ));
                    continue 'node;
                }
            }
        }
    }

    let mut w_spouse = Vec::new();
    for &h in &hidden {
        let strict: Vec<usize> = (0..model.n())
            .filter(|&j| views.is_strict_spouse_pair(h, j))
            .collect();
        if strict.len() == 1 {
            w_spouse.push(format!(
                "hidden node {h} has exactly one strict spouse ({})",
                strict[0]
            ));
        }
    }

    AssumptionReport {
        hidden_child: Check::from_witnesses(w_child),
        hidden_spacing: Check::from_witnesses(w_spacing),
        nonreal_response: Check::from_witnesses(w_imag),
        phase_alignment: Check::from_witnesses(w_phase),
        spouse_pairing: Check::from_witnesses(w_spouse),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, NoiseSpec};

    fn model(n: usize, edges: Vec<Edge>, hidden: &[usize]) -> LdgModel {
        LdgModel::new(
            n,
            edges,
            vec![vec![0.6, -0.1]; n],
            vec![NoiseSpec::Variance(1.0); n],
            hidden.iter().copied().collect(),
        )
        .unwrap()
    }

    fn plain(from: usize, to: usize) -> Edge {
        Edge { from, to, gain: 0.5, taps: None }
    }

    #[test]
    fn hidden_without_observed_child_fails() {
        // hidden 2 is only a child
        let m = model(3, vec![plain(0, 2)], &[2]);
        let rep = check_assumptions(&m);
        assert!(!rep.hidden_child.holds);
        assert!(rep.hidden_child.witnesses[0].contains("hidden node 2"));
    }

    #[test]
    fn hidden_with_single_neighbor_fails() {
        let m = model(3, vec![plain(2, 0)], &[2]);
        let rep = check_assumptions(&m);
        assert!(!rep.hidden_child.holds);
    }

    #[test]
    fn hidden_with_child_and_parent_passes() {
        let m = model(3, vec![plain(2, 0), plain(1, 2)], &[2]);
        assert!(check_assumptions(&m).hidden_child.holds);
    }

    #[test]
    fn close_hidden_pair_fails_spacing() {
        // 3 -> 0 -> ... wait: hidden 3 and 4 joined through node 0: 3 hops
        let m = model(5, vec![plain(3, 0), plain(0, 1), plain(4, 1), plain(4, 2)], &[3, 4]);
        let rep = check_assumptions(&m);
        assert!(!rep.hidden_spacing.holds);
        assert!(rep.hidden_spacing.witnesses[0].contains("3,4"));
    }

    #[test]
    fn disconnected_hidden_pair_passes_spacing() {
        let m = model(6, vec![plain(4, 0), plain(1, 4), plain(5, 2), plain(3, 5)], &[4, 5]);
        assert!(check_assumptions(&m).hidden_spacing.holds);
    }

    #[test]
    fn vanishing_imaginary_response_is_caught() {
        // taps [a, b]: Im ∝ −sinθ(a + 2b·cosθ) vanishes at cosθ = −a/(2b);
        // a = 0.8/√2, b = −0.4 puts the zero exactly on the θ = π/4 grid point
        let a = 0.8 * std::f64::consts::FRAC_1_SQRT_2;
        let m = LdgModel::new(
            2,
            vec![Edge { from: 0, to: 1, gain: 0.5, taps: None }],
            vec![vec![0.6], vec![a, -0.4]],
            vec![NoiseSpec::Variance(1.0); 2],
            Default::default(),
        )
        .unwrap();
        let rep = check_assumptions(&m);
        assert!(!rep.nonreal_response.holds, "{:?}", rep.nonreal_response);
    }

    #[test]
    fn shared_filter_edges_pass_imag_and_phase() {
        let m = model(3, vec![plain(0, 2), plain(1, 2)], &[]);
        let rep = check_assumptions(&m);
        assert!(rep.nonreal_response.holds, "{:?}", rep.nonreal_response);
        assert!(rep.phase_alignment.holds);
    }

    #[test]
    fn explicit_taps_break_phase_alignment() {
        let m = LdgModel::new(
            3,
            vec![
                Edge { from: 0, to: 2, gain: 0.5, taps: None },
                Edge { from: 1, to: 2, gain: 1.0, taps: Some(vec![0.1, 0.6]) },
            ],
            vec![vec![0.5], vec![0.5], vec![0.7, -0.2]],
            vec![NoiseSpec::Variance(1.0); 3],
            Default::default(),
        )
        .unwrap();
        let rep = check_assumptions(&m);
        assert!(!rep.phase_alignment.holds);
    }

    #[test]
    fn single_strict_spouse_fails_pairing() {
        // hidden 3 and node 0 co-parent child 1; no direct link 0–3
        let m = model(4, vec![plain(3, 1), plain(0, 1), plain(2, 3)], &[3]);
        let rep = check_assumptions(&m);
        assert!(!rep.spouse_pairing.holds);
    }

    #[test]
    fn two_strict_spouses_pass_pairing() {
        let m = model(
            5,
            vec![plain(4, 1), plain(0, 1), plain(4, 2), plain(3, 2)],
            &[4],
        );
        let rep = check_assumptions(&m);
        assert!(rep.spouse_pairing.holds, "{:?}", rep.spouse_pairing);
    }

    #[test]
    fn enforce_flags_select_checks() {
        let m = model(3, vec![plain(0, 2)], &[2]);
        let rep = check_assumptions(&m);
        assert!(!rep.all_hold());
        let relaxed = EnforceFlags { hidden_child: false, ..Default::default() };
        assert!(rep.holds_for(&relaxed));
    }
}
