//! Rooted neighborhoods, their canonical classes and laws on them.

mod class;
mod degree;
mod dist;
mod gw;
mod neighborhood;

pub use class::{canonicalize, marginal_class, ClassKind, RootedClass, RootedGraph, MAX_SEARCH_LEAVES};
pub use degree::{limit_degree, LimitDegrees};
pub use dist::{dist_tv, er_limit_law, er_marginal_limit_law, poisson_tree_law, NeighborhoodDist, Provenance};
pub use gw::{sample_gw_cm, sample_gw_er, sample_gw_law, size_biased, GwModel};
pub use neighborhood::{empirical_u, empirical_u_domain, neighborhood, CodedGraph};
