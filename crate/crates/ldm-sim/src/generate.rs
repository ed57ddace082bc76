//! Seeded random-model factory. The shape mirrors the showcase layout: each
//! hidden node carries a large all-observed Markov blanket (children plus one
//! parent), and the leftover observed nodes receive a sparse matching of
//! extra edges so their sparse-component support stays low-degree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assumptions::{check_assumptions, EnforceFlags};
use crate::error::Error;
use crate::model::{Edge, LdgModel, NoiseSpec};
use crate::simulate::spectral_radius;

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub n: usize,
    pub n_h: usize,
    /// Rough target degree of the free (non-blanket) observed nodes; caps the
    /// number of extra observed-observed edges.
    pub avg_degree: f64,
    pub seed: u64,
    pub enforce: EnforceFlags,
    pub gain_range: (f64, f64),
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n: 32,
            n_h: 3,
            avg_degree: 1.0,
            seed: 0,
            enforce: EnforceFlags::default(),
            gain_range: (0.3, 1.0),
            max_attempts: 64,
        }
    }
}

/// Blanket sizes: observed nodes minus a small free pool, split evenly.
fn layout(n: usize, n_h: usize) -> Result<(Vec<usize>, usize), Error> {
    let n_o = n.checked_sub(n_h).filter(|&v| v > 0).ok_or_else(|| {
        Error::Parameter(format!("need observed nodes: n = {n}, hidden = {n_h}"))
    })?;
    if n_h == 0 {
        return Ok((Vec::new(), n_o));
    }
    let free = 2.max((n_o as f64 / 5.0).round() as usize);
    let total = n_o.saturating_sub(free);
    if total < 2 * n_h {
        return Err(Error::Generation(format!(
            "cannot place {n_h} hidden node(s) with disjoint blankets among \
             {n_o} observed nodes; reduce the hidden count"
        )));
    }
    let base = total / n_h;
    let mut sizes = vec![base; n_h];
    for s in sizes.iter_mut().take(total % n_h) {
        *s += 1;
    }
    Ok((sizes, free))
}

pub fn generate_random_network(config: &GeneratorConfig) -> Result<LdgModel, Error> {
    let (lo, hi) = config.gain_range;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Parameter(format!("bad gain range ({lo}, {hi})")));
    }
    let (sizes, free_count) = layout(config.n, config.n_h)?;
    let n = config.n;
    let hidden: Vec<usize> = (n - config.n_h..n).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.max_attempts.max(1) {
        let mut edges = Vec::new();
        let mut next = 0usize;
        for (&h, &sz) in hidden.iter().zip(&sizes) {
            let blanket: Vec<usize> = (next..next + sz).collect();
            next += sz;
            let (parent, children) = blanket.split_last().unwrap();
            for &c in children {
                edges.push(Edge { from: h, to: c, gain: rng.gen_range(lo..hi), taps: None });
            }
            edges.push(Edge { from: *parent, to: h, gain: rng.gen_range(lo..hi), taps: None });
        }
        let mut free: Vec<usize> = (next..next + free_count).collect();
        debug_assert!(free.last().map_or(true, |&v| v < n - config.n_h));
        // Fisher–Yates, then pair off the prefix as a matching
        for i in (1..free.len()).rev() {
            free.swap(i, rng.gen_range(0..=i));
        }
        let budget = ((config.avg_degree * free_count as f64 / 2.0).round() as usize)
            .min(free_count / 2)
            .max(usize::from(free_count >= 2));
        for pair in free.chunks(2).take(budget) {
            if let [i, j] = pair {
                edges.push(Edge { from: *i, to: *j, gain: rng.gen_range(lo..hi), taps: None });
            }
        }

        let node_filters: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.gen_range(0.5..1.0), rng.gen_range(-0.5..0.5)])
            .collect();
        let noise: Vec<NoiseSpec> =
            (0..n).map(|_| NoiseSpec::Variance(rng.gen_range(0.75..1.25))).collect();

        let model = match LdgModel::new(
            n,
            edges,
            node_filters,
            noise,
            hidden.iter().copied().collect(),
        ) {
            Ok(m) => m,
            Err(_) => continue,
        };
        if !check_assumptions(&model).holds_for(&config.enforce) {
            continue;
        }
        if spectral_radius(&model) >= 1.0 - 1e-9 {
            continue;
        }
        return Ok(model);
    }
    Err(Error::Generation(format!(
        "no admissible model in {} attempts (n = {}, hidden = {}); try a smaller \
         hidden count or degree",
        config.max_attempts, config.n, config.n_h
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::derive_views;

    #[test]
    fn default_config_generates_showcase_shape() {
        let model = generate_random_network(&GeneratorConfig::default()).unwrap();
        assert_eq!(model.n(), 32);
        assert_eq!(model.n_h(), 3);
        let views = derive_views(&model);
        for &h in model.hidden() {
            let blanket = views.blanket(h);
            assert!(blanket.len() >= 5, "blanket of {h} too small: {blanket:?}");
            assert!(blanket.iter().all(|b| !model.hidden().contains(b)));
        }
        assert!(check_assumptions(&model).all_hold());
    }

    #[test]
    fn same_seed_is_deterministic() {
        let a = generate_random_network(&GeneratorConfig::default()).unwrap();
        let b = generate_random_network(&GeneratorConfig::default()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_random_network(&GeneratorConfig::default()).unwrap();
        let b = generate_random_network(&GeneratorConfig { seed: 1, ..Default::default() }).unwrap();
        assert_ne!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn overcrowded_hidden_set_errors() {
        let r = generate_random_network(&GeneratorConfig { n: 5, n_h: 2, ..Default::default() });
        assert!(r.is_err());
    }

    #[test]
    fn small_sizes_generate() {
        for (n, n_h) in [(12, 1), (16, 2), (20, 3)] {
            let cfg = GeneratorConfig { n, n_h, seed: 7, ..Default::default() };
            let model = generate_random_network(&cfg).unwrap();
            assert_eq!(model.n(), n);
            assert_eq!(model.n_h(), n_h);
            assert!(check_assumptions(&model).all_hold());
        }
    }

    #[test]
    fn no_hidden_nodes_supported() {
        let cfg = GeneratorConfig { n: 8, n_h: 0, ..Default::default() };
        let model = generate_random_network(&cfg).unwrap();
        assert_eq!(model.n_h(), 0);
        assert!(!model.edges().is_empty());
    }
}
