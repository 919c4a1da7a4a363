use std::collections::{BTreeMap, HashMap, VecDeque};

use super::class::{canonicalize, ClassKind, RootedClass, RootedGraph};
use super::dist::{NeighborhoodDist, Provenance};
use crate::error::{invalid, Result};
use crate::marked_graph::{DomainGraph, JointGraph, MarkSpaces};

/// A graph with marks flattened to integer codes, ready for neighborhood extraction.
#[derive(Debug, Clone)]
pub struct CodedGraph {
    kind: ClassKind,
    vertex_marks: Vec<u32>,
    adj: Vec<Vec<(usize, u32)>>,
}

impl CodedGraph {
    pub fn joint(j: &JointGraph, marks: &MarkSpaces) -> Self {
        Self {
            kind: ClassKind::Joint,
            vertex_marks: j.vertex_marks().iter().map(|&t| marks.joint_vertex_index(t) as u32).collect(),
            adj: j
                .adjacency()
                .into_iter()
                .map(|row| row.into_iter().map(|(w, x)| (w, marks.joint_edge_index(x) as u32)).collect())
                .collect(),
        }
    }

    pub fn domain(g: &DomainGraph) -> Self {
        let gr = g.graph();
        Self {
            kind: ClassKind::domain(g.side()),
            vertex_marks: gr.vertex_marks().iter().map(|&t| u32::from(t)).collect(),
            adj: gr
                .adjacency()
                .into_iter()
                .map(|row| row.into_iter().map(|(w, x)| (w, u32::from(x))).collect())
                .collect(),
        }
    }

    /// From integer mark codes; `edges` are `(u, v, code)` with distinct pairs.
    pub fn from_codes(kind: ClassKind, vertex_marks: Vec<u32>, edges: &[(usize, usize, u32)]) -> Self {
        let mut adj = vec![Vec::new(); vertex_marks.len()];
        for &(u, v, x) in edges {
            adj[u].push((v, x));
            adj[v].push((u, x));
        }
        Self { kind, vertex_marks, adj }
    }

    pub fn n(&self) -> usize {
        self.vertex_marks.len()
    }

    /// Class of the subgraph induced on vertices within distance `h` of `v` (0-based).
    pub fn neighborhood(&self, v: usize, h: u32) -> Result<RootedClass> {
        if v >= self.n() {
            return invalid(format!("vertex {} out of range 1..={}", v + 1, self.n()));
        }
        let mut local: HashMap<usize, usize> = HashMap::from([(v, 0)]);
        let mut order = vec![v];
        let mut queue = VecDeque::from([(v, 0u32)]);
        while let Some((u, du)) = queue.pop_front() {
            if du == h {
                continue;
            }
            for &(w, _) in &self.adj[u] {
                if !local.contains_key(&w) {
                    local.insert(w, order.len());
                    order.push(w);
                    queue.push_back((w, du + 1));
                }
            }
        }
        let mut edges = Vec::new();
        for (i, &u) in order.iter().enumerate() {
            for &(w, x) in &self.adj[u] {
                if let Some(&k) = local.get(&w) {
                    if i < k {
                        edges.push((i, k, x));
                    }
                }
            }
        }
        let g = RootedGraph {
            kind: self.kind,
            depth: h,
            vertex_marks: order.iter().map(|&u| self.vertex_marks[u]).collect(),
            edges,
        };
        canonicalize(&g)
    }

    /// Law of the depth-`h` class of a uniform vertex, by a full sweep.
    pub fn empirical_u(&self, h: u32) -> Result<NeighborhoodDist> {
        let n = self.n();
        if n == 0 {
            return invalid("empirical law needs at least one vertex");
        }
        let mut counts: BTreeMap<RootedClass, u64> = BTreeMap::new();
        for v in 0..n {
            *counts.entry(self.neighborhood(v, h)?).or_default() += 1;
        }
        NeighborhoodDist::from_counts(h, Provenance::Empirical { n, samples: 1 }, counts)
    }
}

pub fn neighborhood(j: &JointGraph, marks: &MarkSpaces, v: usize, h: u32) -> Result<RootedClass> {
    CodedGraph::joint(j, marks).neighborhood(v, h)
}

pub fn empirical_u(j: &JointGraph, marks: &MarkSpaces, h: u32) -> Result<NeighborhoodDist> {
    CodedGraph::joint(j, marks).empirical_u(h)
}

pub fn empirical_u_domain(g: &DomainGraph, h: u32) -> Result<NeighborhoodDist> {
    CodedGraph::domain(g).empirical_u(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marked_graph::{EdgePair, MarkedGraph, VertexPair};

    fn marks() -> MarkSpaces {
        MarkSpaces::from_symbols(&["a"], &["b"], &["t"], &["s"]).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> JointGraph {
        let ab = EdgePair::new(Some(0), Some(0)).unwrap();
        let mut g = MarkedGraph::empty(vec![VertexPair::new(0, 0); n]);
        for &(u, v) in edges {
            g.insert_edge(u, v, ab).unwrap();
        }
        g
    }

    #[test]
    fn isolated_root() {
        let m = marks();
        let c = neighborhood(&graph(1, &[]), &m, 0, 3).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert!(neighborhood(&graph(1, &[]), &m, 1, 0).is_err());
    }

    #[test]
    fn triangle_includes_far_edge() {
        let c = neighborhood(&graph(3, &[(0, 1), (1, 2), (0, 2)]), &marks(), 0, 1).unwrap();
        assert_eq!(c.decode().edges.len(), 3);
    }

    #[test]
    fn path_root_one_child() {
        let c = neighborhood(&graph(3, &[(0, 1), (1, 2)]), &marks(), 0, 1).unwrap();
        assert_eq!((c.vertex_count(), c.root_degree()), (2, 1));
    }

    #[test]
    fn cycle_is_point_mass() {
        let d = empirical_u(&graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]), &marks(), 2).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn edge_plus_isolated() {
        let d = empirical_u(&graph(3, &[(0, 1)]), &marks(), 1).unwrap();
        let mut p: Vec<f64> = d.iter().map(|(_, p)| p).collect();
        p.sort_by(f64::total_cmp);
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15 && (p[1] - 2.0 / 3.0).abs() < 1e-15);
    }
}
