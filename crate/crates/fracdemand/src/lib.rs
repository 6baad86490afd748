//! Exact-arithmetic fractional graph coloring under per-vertex local
//! demands: decision with self-verifying certificates, list-coloring
//! machinery, edge-coloring polytope checks, structural detectors, and a
//! campaign runner for theorem verification and conjecture search.

pub mod appendix;
pub mod bits;
pub mod campaign;
pub mod coloring_search;
pub mod demand;
pub mod edgefrac;
pub mod error;
pub mod family;
pub mod fracsolve;
pub mod graph;
pub mod interval;
pub mod listfrac;
pub mod lp;
pub mod rational;
pub mod rng;
pub mod structure;
pub mod setsys;

pub use demand::{DemandFn, WeightFn};
pub use error::{Error, Result};
pub use fracsolve::{ColorabilityVerdict, FractionalColoring, SetColoring};
pub use graph::{Graph, Multigraph};
pub use interval::IntervalSet;
pub use rational::Q;
pub use setsys::VertexSet;
