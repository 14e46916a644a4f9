//! Fractal dimension estimation.
//!
//! Box counting on dyadic (or, for ternary fixtures, triadic) ladders with
//! least-squares fits over a scale window, mass-radius fits over a growth
//! history, and the planar/linear slicing protocol that reports full-space
//! dimensions by adding the codimension back.

mod boxcount;
mod fit;
mod fixtures;
mod pointset;
mod slicing;

pub use boxcount::{box_count, Ladder, ScaleSample, ScaleSeries};
pub use fit::{
    fit_dimension, mass_radius_dimension, scaling_window, DimensionEstimate, MIN_SCALES,
};
pub use fixtures::{generate_fixture, FixtureKind};
pub use pointset::{extract_interface, PointSet};
pub use slicing::{slice, sliced_dimension, SliceFit, SlicedDimension};
