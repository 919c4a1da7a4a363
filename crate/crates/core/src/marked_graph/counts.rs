use serde::{Deserialize, Serialize};

use super::graph::{DomainGraph, JointGraph};
use super::marks::{MarkSpaces, Side};
use crate::error::{invalid, Result};

/// Mark counts `m⃗`, `u⃗` and the degree sequence of a graph.
///
/// Counts are dense and follow the alphabet order: for joint graphs the index
/// order of [`MarkSpaces::joint_edge_index`] / [`MarkSpaces::joint_vertex_index`],
/// for domain graphs the order of the domain alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVectors {
    pub edge_counts: Vec<u64>,
    pub vertex_counts: Vec<u64>,
    pub degrees: Vec<usize>,
}

impl CountVectors {
    pub fn edge_total(&self) -> u64 {
        self.edge_counts.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }
}

pub fn joint_counts(j: &JointGraph, marks: &MarkSpaces) -> CountVectors {
    let mut edge_counts = vec![0; marks.joint_edge_count()];
    for (_, _, x) in j.edges() {
        edge_counts[marks.joint_edge_index(x)] += 1;
    }
    let mut vertex_counts = vec![0; marks.joint_vertex_count()];
    for &t in j.vertex_marks() {
        vertex_counts[marks.joint_vertex_index(t)] += 1;
    }
    CountVectors { edge_counts, vertex_counts, degrees: j.degree_sequence() }
}

pub fn domain_counts(g: &DomainGraph, marks: &MarkSpaces) -> CountVectors {
    let side = g.side();
    let mut edge_counts = vec![0; marks.edge_alphabet(side).len()];
    for (_, _, x) in g.graph().edges() {
        edge_counts[usize::from(x)] += 1;
    }
    let mut vertex_counts = vec![0; marks.vertex_alphabet(side).len()];
    for &t in g.graph().vertex_marks() {
        vertex_counts[usize::from(t)] += 1;
    }
    CountVectors { edge_counts, vertex_counts, degrees: g.graph().degree_sequence() }
}

/// Counts of joint marks summed over the other coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedCounts {
    pub side: Side,
    /// `m(xᵢ)` for `xᵢ ∈ Ξᵢ`, followed by `m(∘ᵢ)` in the last slot.
    pub edge_counts: Vec<u64>,
    /// `u(θᵢ)` for `θᵢ ∈ Θᵢ`.
    pub vertex_counts: Vec<u64>,
}

impl ProjectedCounts {
    pub fn placeholder_count(&self) -> u64 {
        *self.edge_counts.last().expect("placeholder slot")
    }
}

pub fn project_counts(cv: &CountVectors, side: Side, marks: &MarkSpaces) -> Result<ProjectedCounts> {
    if cv.edge_counts.len() != marks.joint_edge_count()
        || cv.vertex_counts.len() != marks.joint_vertex_count()
    {
        return invalid("count vectors are not indexed by the joint alphabets");
    }
    let ne = marks.edge_alphabet(side).len();
    let mut edge_counts = vec![0; ne + 1];
    for (i, &c) in cv.edge_counts.iter().enumerate() {
        let x = marks.joint_edge_mark(i).expect("index in range");
        edge_counts[x.get(side).map_or(ne, usize::from)] += c;
    }
    let mut vertex_counts = vec![0; marks.vertex_alphabet(side).len()];
    for (i, &c) in cv.vertex_counts.iter().enumerate() {
        let t = marks.joint_vertex_mark(i).expect("index in range");
        vertex_counts[usize::from(t.get(side))] += c;
    }
    Ok(ProjectedCounts { side, edge_counts, vertex_counts })
}

/// Degree-class counts `c_k(d⃗)` and, optionally, `c_{k,l}(d⃗, d⃗′)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStatistics {
    /// `class_counts[k] = c_k(d⃗)` for `k = 0..=max(d)`.
    pub class_counts: Vec<usize>,
    /// `pair_counts[k][l] = c_{k,l}(d⃗, d⃗′)`, dense over `0..=max(d)` × `0..=max(d′)`.
    pub pair_counts: Option<Vec<Vec<usize>>>,
}

impl DegreeStatistics {
    pub fn c(&self, k: usize) -> usize {
        self.class_counts.get(k).copied().unwrap_or(0)
    }

    pub fn c_pair(&self, k: usize, l: usize) -> usize {
        self.pair_counts
            .as_ref()
            .and_then(|p| p.get(k))
            .and_then(|row| row.get(l))
            .copied()
            .unwrap_or(0)
    }
}

pub fn class_counts(d: &[usize]) -> Vec<usize> {
    let max = d.iter().copied().max().unwrap_or(0);
    let mut c = vec![0; max + 1];
    for &k in d {
        c[k] += 1;
    }
    c
}

pub fn degree_statistics(d: &[usize], d_prime: Option<&[usize]>) -> Result<DegreeStatistics> {
    let class_counts = class_counts(d);
    let pair_counts = match d_prime {
        None => None,
        Some(dp) if dp.len() != d.len() => {
            return invalid(format!("degree sequences differ in length: {} vs {}", d.len(), dp.len()))
        }
        Some(dp) => {
            let lmax = dp.iter().copied().max().unwrap_or(0);
            let mut p = vec![vec![0; lmax + 1]; class_counts.len()];
            for (&k, &l) in d.iter().zip(dp) {
                p[k][l] += 1;
            }
            Some(p)
        }
    };
    Ok(DegreeStatistics { class_counts, pair_counts })
}
