//! Distributed compression of marked random graphs.
//!
//! Two correlated marked graphs on a common vertex set are compressed by
//! separate encoders and recovered jointly. The crate provides the graph data
//! model, Erdős–Rényi and configuration-model ensembles, local neighborhood
//! statistics, closed-form BC entropies with the resulting rate region, a
//! random-binning codec simulator and exhaustive counting oracles.

pub mod codec;
pub mod ensembles;
pub mod entropy;
mod error;
pub mod local_weak;
pub mod marked_graph;
pub mod oracles;
pub mod rng;

pub use error::{Error, Result};
