//! Exact-arithmetic laboratory for local search on weighted Max-Cut.
//!
//! The crate builds the hard instances for FLIP and smoothed 3-FLIP, runs
//! local search under several pivot rules, and constructs and certifies long
//! improving flip sequences. All weights are dyadic rationals and every
//! comparison is exact.

pub mod construction;
pub mod cut;
pub mod engine;
pub mod error;
pub mod format;
pub mod graph;
pub mod instance;
pub mod maxcut;
pub mod rng;
pub mod signs;
pub mod weight;

pub use cut::{Cut, FlipSequence};
pub use error::{Error, Result};
pub use graph::{VertexId, WeightedGraph};
pub use instance::Instance;
pub use rng::RngSeed;
pub use weight::{Rational, Weight};
