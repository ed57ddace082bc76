//! Finite-sample spectral estimation: truncated correlogram PSDM and its
//! inverse, plus the error budgets (truncation order, sample bounds, and the
//! perturbation bound on the inverse).

mod bounds;
mod correlogram;
mod error;
pub mod io;

pub use bounds::{
    failure_probability, fit_mixing, ipsdm_error_bound, lag_norms, sample_bound,
    truncation_bound, truncation_order, ClassBounds, ErrorBudget,
};
pub use correlogram::{estimate_autocorr, ipsdm_estimate, truncated_psdm, CorrelogramEstimate};
pub use error::Error;
