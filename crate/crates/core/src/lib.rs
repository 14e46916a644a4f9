//! Lattice Laplacian growth and fractal dimension estimation.
//!
//! Two growth engines produce on-lattice aggregates in 2D and 3D:
//! [`walker`] releases random walkers that stick on first contact, and
//! [`dbm`] solves the Laplace equation explicitly and grows the perimeter
//! with probability proportional to a power of the local field. The
//! [`analysis`] module measures the fractal dimension of the result by box
//! counting, mass-radius scaling and planar/linear slicing.

// Parameter checks use negated comparisons on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cluster;
pub mod dbm;
mod error;
pub mod lattice;
mod rng;
pub mod walker;

pub use cluster::{Cluster, GrowthHistory, HistoryRecord};
pub use error::{Error, Result};
pub use lattice::LatticePoint;
pub use rng::{RngSeed, SimRng};
