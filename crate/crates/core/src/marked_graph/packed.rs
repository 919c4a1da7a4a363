//! Bitmask representation of small domain graphs, used by the exhaustive
//! decoder and the counting oracles.
//!
//! Vertex pairs `(u, v)` with `u < v` are numbered lexicographically; a graph on
//! `n ≤ 11` vertices fits its edge set in one `u64` per edge mark.

use super::graph::{DomainGraph, JointGraph, MarkedGraph};
use super::marks::{Mark, MarkSpaces, Side};
use super::{marginal, CountVectors};
use crate::error::{Error, Result};

pub const MAX_PACKED_N: usize = 11;

#[derive(Debug, Clone)]
pub struct PairIndex {
    n: usize,
    pairs: Vec<(usize, usize)>,
    incident: Vec<u64>,
}

impl PairIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_PACKED_N {
            return Err(Error::Resource(format!(
                "packed graphs support n <= {MAX_PACKED_N}, got {n}"
            )));
        }
        let mut pairs = Vec::new();
        let mut incident = vec![0u64; n];
        for u in 0..n {
            for v in u + 1..n {
                let bit = 1u64 << pairs.len();
                incident[u] |= bit;
                incident[v] |= bit;
                pairs.push((u, v));
            }
        }
        Ok(Self { n, pairs, incident })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn pair_position(&self, u: usize, v: usize) -> usize {
        let (u, v) = (u.min(v), u.max(v));
        // pairs with first endpoint < u, then offset within row u
        u * (2 * self.n - u - 1) / 2 + (v - u - 1)
    }

    pub fn degrees(&self, edges: u64) -> Vec<usize> {
        self.incident.iter().map(|m| (m & edges).count_ones() as usize).collect()
    }
}

/// A domain graph as one edge bitmask per mark plus one vertex bitmask per vertex mark.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PackedDomain {
    pub edge_masks: Vec<u64>,
    pub vertex_masks: Vec<u64>,
}

impl PackedDomain {
    pub fn union(&self) -> u64 {
        self.edge_masks.iter().fold(0, |a, m| a | m)
    }

    pub fn from_domain(g: &DomainGraph, idx: &PairIndex, marks: &MarkSpaces) -> Self {
        let side = g.side();
        let mut edge_masks = vec![0u64; marks.edge_alphabet(side).len()];
        for (u, v, x) in g.graph().edges() {
            edge_masks[usize::from(x)] |= 1 << idx.pair_position(u, v);
        }
        let mut vertex_masks = vec![0u64; marks.vertex_alphabet(side).len()];
        for (v, &t) in g.graph().vertex_marks().iter().enumerate() {
            vertex_masks[usize::from(t)] |= 1 << v;
        }
        Self { edge_masks, vertex_masks }
    }

    pub fn to_domain(&self, side: Side, idx: &PairIndex) -> DomainGraph {
        let mut vm = vec![0 as Mark; idx.n()];
        for (t, &mask) in self.vertex_masks.iter().enumerate() {
            for (v, slot) in vm.iter_mut().enumerate() {
                if mask >> v & 1 == 1 {
                    *slot = t as Mark;
                }
            }
        }
        let mut g = MarkedGraph::empty(vm);
        for (x, &mask) in self.edge_masks.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                let (u, v) = idx.pair(i);
                g.insert_edge(u, v, x as Mark).expect("packed graphs are simple");
            }
        }
        DomainGraph::new_unchecked(side, g)
    }

    /// The marginals of a joint graph in packed form.
    pub fn split_joint(j: &JointGraph, idx: &PairIndex, marks: &MarkSpaces) -> (Self, Self) {
        (
            Self::from_domain(&marginal(j, Side::First), idx, marks),
            Self::from_domain(&marginal(j, Side::Second), idx, marks),
        )
    }
}

/// Exact counts of the superposition of two packed marginals.
pub fn joint_counts_packed(
    g1: &PackedDomain,
    g2: &PackedDomain,
    idx: &PairIndex,
    marks: &MarkSpaces,
) -> CountVectors {
    let (u1, u2) = (g1.union(), g2.union());
    let (n1, n2) = (g1.edge_masks.len(), g2.edge_masks.len());
    let mut edge_counts = vec![0u64; marks.joint_edge_count()];
    // joint index = i1 * (n2 + 1) + i2, placeholder in the last slot
    for i1 in 0..=n1 {
        let a = if i1 < n1 { g1.edge_masks[i1] } else { !u1 };
        for i2 in 0..=n2 {
            if i1 == n1 && i2 == n2 {
                continue;
            }
            let b = if i2 < n2 { g2.edge_masks[i2] } else { !u2 };
            edge_counts[i1 * (n2 + 1) + i2] = (a & b).count_ones() as u64;
        }
    }
    let nt2 = g2.vertex_masks.len();
    let mut vertex_counts = vec![0u64; marks.joint_vertex_count()];
    for (t1, &a) in g1.vertex_masks.iter().enumerate() {
        for (t2, &b) in g2.vertex_masks.iter().enumerate() {
            vertex_counts[t1 * nt2 + t2] = (a & b).count_ones() as u64;
        }
    }
    CountVectors { edge_counts, vertex_counts, degrees: idx.degrees(u1 | u2) }
}

/// Number of domain graphs on `n` vertices for the given alphabet sizes, or `None` on overflow.
pub fn domain_graph_count(n: usize, edge_marks: usize, vertex_marks: usize) -> Option<u128> {
    let pairs = (n * n.saturating_sub(1) / 2) as u32;
    (edge_marks as u128 + 1)
        .checked_pow(pairs)?
        .checked_mul((vertex_marks as u128).checked_pow(n as u32)?)
}

/// Visits every domain graph on `idx.n()` vertices with the given alphabet sizes.
///
/// Enumeration order is deterministic: vertex marks vary slowest, pair marks fastest.
pub fn for_each_domain_graph(
    idx: &PairIndex,
    edge_marks: usize,
    vertex_marks: usize,
    mut visit: impl FnMut(&PackedDomain),
) {
    let n = idx.n();
    let p = idx.pair_count();
    let mut vm = vec![0usize; n];
    let mut pm = vec![0usize; p];
    let mut g = PackedDomain { edge_masks: vec![0; edge_marks], vertex_masks: vec![0; vertex_marks] };
    loop {
        g.vertex_masks.iter_mut().for_each(|m| *m = 0);
        for (v, &t) in vm.iter().enumerate() {
            g.vertex_masks[t] |= 1 << v;
        }
        pm.iter_mut().for_each(|x| *x = 0);
        loop {
            g.edge_masks.iter_mut().for_each(|m| *m = 0);
            for (i, &x) in pm.iter().enumerate() {
                if x > 0 {
                    g.edge_masks[x - 1] |= 1 << i;
                }
            }
            visit(&g);
            if !odometer(&mut pm, edge_marks + 1) {
                break;
            }
        }
        if !odometer(&mut vm, vertex_marks) {
            break;
        }
    }
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marked_graph::{joint_counts, superpose};

    #[test]
    fn pair_positions_match_enumeration() {
        let idx = PairIndex::new(6).unwrap();
        for i in 0..idx.pair_count() {
            let (u, v) = idx.pair(i);
            assert_eq!(idx.pair_position(u, v), i);
            assert_eq!(idx.pair_position(v, u), i);
        }
        assert!(PairIndex::new(12).is_err());
    }

    #[test]
    fn enumeration_visits_every_graph_once() {
        let idx = PairIndex::new(3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for_each_domain_graph(&idx, 2, 2, |g| {
            assert!(seen.insert(g.clone()));
        });
        assert_eq!(seen.len() as u128, domain_graph_count(3, 2, 2).unwrap());
    }

    #[test]
    fn packed_joint_counts_agree_with_graph_counts() {
        let marks = MarkSpaces::from_symbols(&["a", "c"], &["b"], &["t", "u"], &["s"]).unwrap();
        let idx = PairIndex::new(3).unwrap();
        let mut firsts = Vec::new();
        for_each_domain_graph(&idx, 2, 2, |g| firsts.push(g.clone()));
        let mut seconds = Vec::new();
        for_each_domain_graph(&idx, 1, 1, |g| seconds.push(g.clone()));
        for a in firsts.iter().step_by(7) {
            for b in &seconds {
                let g1 = a.to_domain(Side::First, &idx);
                let g2 = b.to_domain(Side::Second, &idx);
                let j = superpose(&g1, &g2).unwrap();
                assert_eq!(joint_counts_packed(a, b, &idx, &marks), joint_counts(&j, &marks));
                let (p1, p2) = PackedDomain::split_joint(&j, &idx, &marks);
                assert_eq!((&p1, &p2), (a, b));
            }
        }
    }
}
