//! Marked graphs, superposition and marginals, mark-count and degree statistics.

mod counts;
mod format;
mod graph;
mod marks;
pub mod packed;

pub use counts::{
    class_counts, degree_statistics, domain_counts, joint_counts, project_counts, CountVectors,
    DegreeStatistics, ProjectedCounts,
};
pub use format::{parse_domain_graph, parse_graph, serialize_domain_graph, serialize_graph};
pub use graph::{marginal, superpose, DomainGraph, JointGraph, MarkedGraph};
pub use marks::{EdgePair, Mark, MarkSpaces, Side, VertexPair, PLACEHOLDER};
