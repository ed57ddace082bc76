//! Linear dynamical graph models: construction and serialization, exact
//! spectral quantities (PSDM, observed-block inverse, sparse + low-rank
//! ground truth), graph views (topology, moral graph, Markov blankets),
//! admissibility checks, seeded random generation, and WSS simulation.

mod assumptions;
mod error;
mod generate;
mod graph;
mod model;
mod simulate;
mod spectral;

pub use assumptions::{check_assumptions, AssumptionReport, Check, EnforceFlags};
pub use error::Error;
pub use generate::{generate_random_network, GeneratorConfig};
pub use graph::{derive_views, GraphViews};
pub use model::{
    frequency_grid, unit_circle_check, Edge, LdgModel, NoiseSpec, DETECT_TOL, GRID_SIZE,
    WELL_POSED_TOL,
};
pub use simulate::{simulate, spectral_radius};
pub use spectral::{
    autocorr_exact, imag_skew, ipsdm_full, ipsdm_observed, psdm_exact, select, sl_ground_truth,
    GroundTruthDecomposition,
};
