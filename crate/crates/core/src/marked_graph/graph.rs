use std::collections::BTreeMap;

use super::marks::{EdgePair, Mark, MarkSpaces, Side, VertexPair};
use crate::error::{invalid, Result};

/// A simple marked graph on vertices `0..n`.
///
/// Edges are keyed by the sorted pair `(u, v)` with `u < v`, so iteration is
/// lexicographic and serialization is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedGraph<V, E> {
    vertex_marks: Vec<V>,
    edges: BTreeMap<(usize, usize), E>,
}

impl<V: Copy, E: Copy> MarkedGraph<V, E> {
    pub fn empty(vertex_marks: Vec<V>) -> Self {
        Self { vertex_marks, edges: BTreeMap::new() }
    }

    pub fn from_edges(
        vertex_marks: Vec<V>,
        edges: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Result<Self> {
        let mut g = Self::empty(vertex_marks);
        for (u, v, e) in edges {
            g.insert_edge(u, v, e)?;
        }
        Ok(g)
    }

    pub fn insert_edge(&mut self, u: usize, v: usize, mark: E) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return invalid(format!("edge ({u}, {v}) out of range for n = {n}"));
        }
        if u == v {
            return invalid(format!("self-loop at vertex {u}"));
        }
        let key = (u.min(v), u.max(v));
        if self.edges.insert(key, mark).is_some() {
            return invalid(format!("duplicate edge ({}, {})", key.0, key.1));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.vertex_marks.len()
    }

    pub fn vertex_mark(&self, v: usize) -> V {
        self.vertex_marks[v]
    }

    pub fn vertex_marks(&self) -> &[V] {
        &self.vertex_marks
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<E> {
        self.edges.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, E)> + '_ {
        self.edges.iter().map(|(&(u, v), &e)| (u, v, e))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for &(u, v) in self.edges.keys() {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Adjacency lists sorted by neighbor index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, E)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (&(u, v), &e) in &self.edges {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        for list in &mut adj {
            list.sort_by_key(|&(w, _)| w);
        }
        adj
    }

    pub fn map_marks<V2: Copy, E2: Copy>(
        &self,
        vertex: impl Fn(V) -> V2,
        edge: impl Fn(E) -> Option<E2>,
    ) -> MarkedGraph<V2, E2> {
        MarkedGraph {
            vertex_marks: self.vertex_marks.iter().map(|&v| vertex(v)).collect(),
            edges: self
                .edges
                .iter()
                .filter_map(|(&k, &e)| edge(e).map(|e2| (k, e2)))
                .collect(),
        }
    }
}

/// Jointly marked graph: edge marks in Ξ₁,₂ and vertex marks in Θ₁,₂.
pub type JointGraph = MarkedGraph<VertexPair, EdgePair>;

impl JointGraph {
    pub fn validate(&self, marks: &MarkSpaces) -> Result<()> {
        if let Some(t) = self.vertex_marks.iter().find(|t| !marks.contains_vertex_pair(**t)) {
            return invalid(format!("vertex mark {t:?} outside the joint vertex alphabet"));
        }
        if let Some(x) = self.edges.values().find(|x| !marks.contains_edge_pair(**x)) {
            return invalid(format!("edge mark {x:?} outside the joint edge alphabet"));
        }
        Ok(())
    }
}

/// A marked graph living in one domain (edge marks in Ξᵢ, vertex marks in Θᵢ).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainGraph {
    side: Side,
    graph: MarkedGraph<Mark, Mark>,
}

impl DomainGraph {
    pub fn new(side: Side, graph: MarkedGraph<Mark, Mark>, marks: &MarkSpaces) -> Result<Self> {
        let (nv, ne) = (marks.vertex_alphabet(side).len(), marks.edge_alphabet(side).len());
        if graph.vertex_marks.iter().any(|&t| usize::from(t) >= nv) {
            return invalid("vertex mark outside the domain alphabet");
        }
        if graph.edges.values().any(|&x| usize::from(x) >= ne) {
            return invalid("edge mark outside the domain alphabet");
        }
        Ok(Self { side, graph })
    }

    pub(crate) fn new_unchecked(side: Side, graph: MarkedGraph<Mark, Mark>) -> Self {
        Self { side, graph }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn graph(&self) -> &MarkedGraph<Mark, Mark> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

/// G₁ ⊕ G₂: union of the edge sets, missing coordinates filled with placeholders.
pub fn superpose(g1: &DomainGraph, g2: &DomainGraph) -> Result<JointGraph> {
    if g1.n() != g2.n() {
        return invalid(format!("vertex counts differ: {} vs {}", g1.n(), g2.n()));
    }
    if g1.side != Side::First || g2.side != Side::Second {
        return invalid("superpose expects a first-domain and a second-domain graph");
    }
    let vertex_marks = g1
        .graph
        .vertex_marks
        .iter()
        .zip(&g2.graph.vertex_marks)
        .map(|(&a, &b)| VertexPair::new(a, b))
        .collect();
    let mut edges: BTreeMap<(usize, usize), EdgePair> = BTreeMap::new();
    for (&k, &x1) in &g1.graph.edges {
        edges.insert(k, EdgePair::new(Some(x1), g2.graph.edges.get(&k).copied()).expect("x1 set"));
    }
    for (&k, &x2) in &g2.graph.edges {
        edges.entry(k).or_insert_with(|| EdgePair::new(None, Some(x2)).expect("x2 set"));
    }
    Ok(MarkedGraph { vertex_marks, edges })
}

/// Projects marks onto domain `side` and drops edges whose coordinate is the placeholder.
pub fn marginal(j: &JointGraph, side: Side) -> DomainGraph {
    DomainGraph::new_unchecked(side, j.map_marks(|t| t.get(side), |x| x.get(side)))
}
