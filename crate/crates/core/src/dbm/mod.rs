//! Dielectric-breakdown growth: an explicit Laplace solve followed by
//! perimeter growth with probability proportional to `(k * u)^eta`.
//!
//! The potential is pinned to 0 on the cluster and to 1 on a far
//! circle/sphere, relaxed with successive over-relaxation, and re-solved
//! (warm-started) after every added site. `eta = 1` is the linear growth
//! law; `eta = 0` degenerates to Eden growth.

mod grid;
mod growth;

pub use grid::{solve_laplace, PotentialGrid, SiteKind, SolveReport, CHECKPOINT_INTERVAL};
pub use growth::{
    growth_candidates, run_dbm, run_dbm_observed, select_growth_site, Candidate, DbmParams,
};
