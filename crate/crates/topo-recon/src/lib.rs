//! Topology reconstruction from decomposed inverse spectra: observed edges
//! from the sparse support, hidden-node count and neighborhoods from the
//! connected components of the low-rank support, plus scoring against a
//! generating model.

mod error;
mod evaluate;
mod io;
mod paths;
mod recon;

pub use error::Error;
pub use evaluate::{evaluate, HiddenMatch, Metrics};
pub use io::TopologyJson;
pub use paths::{dm_path_exists, DmPathWitness};
pub use recon::{
    attach_hidden, full_topology, hidden_components, majority_vote, normalize_inf,
    observable_edges, HiddenComponent, ReconstructedTopology, DEFAULT_TAU,
};
