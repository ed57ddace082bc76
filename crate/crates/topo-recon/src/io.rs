//! Topology serialization: observed nodes keep their numeric labels as
//! strings, hidden nodes get synthetic labels h1, h2, ….

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::recon::ReconstructedTopology;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyJson {
    pub observed: Vec<String>,
    pub hidden: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl TopologyJson {
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

impl ReconstructedTopology {
    pub fn to_json(&self) -> TopologyJson {
        let hidden_label = |l: usize| format!("h{}", l + 1);
        let mut edges: Vec<[String; 2]> = self
            .observed_edges
            .iter()
            .map(|&(i, j)| [i.to_string(), j.to_string()])
            .collect();
        for (l, attach) in self.hidden_attachments.iter().enumerate() {
            for &i in attach {
                edges.push([i.to_string(), hidden_label(l)]);
            }
        }
        TopologyJson {
            observed: (0..self.n_o).map(|i| i.to_string()).collect(),
            hidden: (0..self.n_h).map(hidden_label).collect(),
            edges,
        }
    }

    pub fn from_json(json: &TopologyJson) -> Result<Self, Error> {
        let n_o = json.observed.len();
        let n_h = json.hidden.len();
        let observed_index = |s: &str| -> Result<usize, Error> {
            let i: usize = s
                .parse()
                .map_err(|_| Error::Parse(format!("unknown observed node id {s:?}")))?;
            if i >= n_o {
                return Err(Error::Parse(format!("observed node id {i} out of range")));
            }
            Ok(i)
        };
        let mut observed_edges = BTreeSet::new();
        let mut hidden_attachments = vec![BTreeSet::new(); n_h];
        for [a, b] in &json.edges {
            let ha = json.hidden.iter().position(|h| h == a);
            let hb = json.hidden.iter().position(|h| h == b);
            match (ha, hb) {
                (None, None) => {
                    let (i, j) = (observed_index(a)?, observed_index(b)?);
                    observed_edges.insert((i.min(j), i.max(j)));
                }
                (Some(l), None) => {
                    hidden_attachments[l].insert(observed_index(b)?);
                }
                (None, Some(l)) => {
                    hidden_attachments[l].insert(observed_index(a)?);
                }
                (Some(_), Some(_)) => {
                    return Err(Error::Parse(format!(
                        "hidden-hidden edge {a:?}–{b:?} is not representable"
                    )));
                }
            }
        }
        Ok(ReconstructedTopology {
            n_o,
            n_h,
            observed_edges,
            hidden_attachments,
            flagged: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReconstructedTopology {
        ReconstructedTopology {
            n_o: 4,
            n_h: 2,
            observed_edges: [(0, 1), (2, 3)].into_iter().collect(),
            hidden_attachments: vec![
                [0, 2].into_iter().collect(),
                [1, 3].into_iter().collect(),
            ],
            flagged: Vec::new(),
        }
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let back = ReconstructedTopology::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("topology.json");
        let t = sample();
        t.to_json().save(&path).unwrap();
        let loaded = TopologyJson::load(&path).unwrap();
        assert_eq!(ReconstructedTopology::from_json(&loaded).unwrap(), t);
    }

    #[test]
    fn hidden_hidden_edges_rejected() {
        let mut json = sample().to_json();
        json.edges.push(["h1".into(), "h2".into()]);
        assert!(ReconstructedTopology::from_json(&json).is_err());
    }
}
