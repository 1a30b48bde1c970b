//! Metric-geometry toolkit for desk-scale Gromov-Hausdorff experiments.
//!
//! The crate is organized around a single currency, the [`FiniteMetricSpace`]
//! (a labelled symmetric distance matrix), and a family of constructions that
//! produce and consume it:
//!
//! * [`metric_core`] — metric axioms, diameter, Hausdorff distance inside a
//!   common ambient space.
//! * [`graph_spaces`] — metric graphs with the intrinsic geodesic metric,
//!   epsilon-net sampling, and the named model spaces (the tripod `E`, its
//!   extension `E'`, the four-spoke star, circles).
//! * [`gh_solver`] — correspondences, distortion, exact GH distance on tiny
//!   instances, lower bounds, correspondence gluings, and the max-metric
//!   product.
//! * [`constructions`] — the canonical eight-step circle-to-tripod map `phi`
//!   and the chordal-circle root.
//! * [`topology`] — loops on metric graphs, free-group classification of
//!   their homotopy classes, and loop transfer across a glued space.
//!
//! Everything is immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

pub mod constructions;
pub mod error;
pub mod graph_spaces;
pub mod gh_solver;
pub mod metric_core;
pub mod random;
pub mod topology;

pub use error::{Error, Result};
pub use metric_core::{FiniteMetricSpace, SubsetRef, METRIC_TOL};
