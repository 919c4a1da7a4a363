//! Marked Erdős–Rényi and configuration-model ensembles: samplers and exact log-probabilities.

mod cm;
mod er;
mod model;

pub use cm::{
    asymptotic_log_graph_count, build_degree_sequence, log_prob_cm, sample_cm,
    sample_simple_with_degrees, CmLogProb, CountMode, DegreeSeq, SimpleGraph, PAIRING_RETRY_CAP,
};
pub use er::{log_prob_er, sample_er};
pub use model::{
    edge_marginal, format_model_config, parse_model_config, vertex_marginal, CmModel, ErModel, Model,
};

use crate::error::Result;
use crate::marked_graph::JointGraph;
use crate::rng::SeedStream;

/// Draws one joint graph on `n` vertices from either ensemble.
pub fn sample_model(model: &Model, n: usize, stream: &SeedStream) -> Result<JointGraph> {
    match model {
        Model::Er(m) => sample_er(m, n, stream),
        Model::Cm(m) => sample_cm(m, n, stream),
    }
}
