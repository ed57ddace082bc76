//! Sparse + low-rank decomposition of skew-symmetric matrices.
//!
//! The central problem: given a skew-symmetric `C = S̃ + L̃` with `S̃` sparse
//! and `L̃` low rank, recover the pair by solving
//!
//! ```text
//! min  t·‖S‖₁ + (1−t)·‖L‖_*   s.t.  S + L = C,  S, L skew-symmetric
//! ```
//!
//! over a grid of penalties `t`, and certify uniqueness of the recovered pair
//! through an explicit dual certificate built from the tangent spaces of the
//! sparse and low-rank matrix varieties.

mod certificate;
mod conditions;
mod error;
pub mod io;
mod prox;
mod skew;
mod solver;
mod sweep;
mod tangent;

pub use certificate::{certify, Certificate};
pub use conditions::{
    deg_max, gamma_range_deg_inc, gamma_range_muxi, incoherence, mu_exact, xi_exact,
    youla_projection_check, ConditionReport, MuBound, YoulaCheck,
};
pub use error::Error;
pub use prox::{soft_threshold, svt};
pub use skew::{project_skew, SkewMatrix};
pub use solver::{solve_decomposition, DecompositionSolution, SolveOptions};
pub use sweep::{compute_diff, compute_tol, sweep_t, SweepOptions, SweepPoint, SweepResult};
pub use tangent::{
    project_onto_omega, project_onto_t, transverse_intersection, Intersection,
    LowRankTangentSpace, SparseTangentSpace,
};
