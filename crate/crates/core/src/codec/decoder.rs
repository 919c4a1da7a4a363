use std::collections::HashMap;

use super::params::{marginal_bytes, packed_bytes, Bin, Binner};
use super::typical::TypicalSpec;
use crate::error::{Error, Result};
use crate::marked_graph::packed::{domain_graph_count, for_each_domain_graph, joint_counts_packed, PackedDomain, PairIndex};
use crate::marked_graph::{marginal, superpose, JointGraph, MarkSpaces, Side};

pub const MAX_DECODER_N: usize = 7;
/// Cap on the number of marginal graphs enumerated per domain.
pub const MAX_MARGINAL_ENUMERATION: u128 = 1 << 22;
/// Cap on joint typicality checks while building the index.
pub const MAX_PAIR_CHECKS: u128 = 400_000_000;

/// One enumerated marginal graph.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub packed: PackedDomain,
    pub bytes: Vec<u8>,
}

/// The typical set, stored as pairs of ids into the two lists of admissible marginals.
#[derive(Debug, Clone)]
pub struct TypicalIndex {
    spec: TypicalSpec,
    idx: PairIndex,
    firsts: Vec<Candidate>,
    seconds: Vec<Candidate>,
    /// `by_first[a]` lists the `b` with `(a, b)` typical.
    by_first: Vec<Vec<u32>>,
    by_second: Vec<Vec<u32>>,
    first_id: HashMap<PackedDomain, u32>,
    second_id: HashMap<PackedDomain, u32>,
    size: usize,
}

fn admissible(spec: &TypicalSpec, side: Side, idx: &PairIndex) -> Result<Vec<Candidate>> {
    let marks = spec.marks();
    let (ne, nv) = (marks.edge_alphabet(side).len(), marks.vertex_alphabet(side).len());
    let total = domain_graph_count(idx.n(), ne, nv).unwrap_or(u128::MAX);
    if total > MAX_MARGINAL_ENUMERATION {
        return Err(Error::Resource(format!(
            "{total} marginal graphs for domain {} exceed the decoder cap {MAX_MARGINAL_ENUMERATION}",
            side.index()
        )));
    }
    let mut out = Vec::new();
    for_each_domain_graph(idx, ne, nv, |g| {
        let ec: Vec<u64> = g.edge_masks.iter().map(|m| u64::from(m.count_ones())).collect();
        let vc: Vec<u64> = g.vertex_masks.iter().map(|m| u64::from(m.count_ones())).collect();
        let max_deg = idx.degrees(g.union()).into_iter().max().unwrap_or(0);
        if spec.marginal_admissible(side, &ec, &vc, max_deg) {
            out.push(Candidate { packed: g.clone(), bytes: packed_bytes(g, idx) });
        }
    });
    Ok(out)
}

/// Allocation-free ER typicality test on packed marginals.
struct FastEr {
    all: u64,
    edge_target: Vec<f64>,
    vertex_target: Vec<f64>,
    slack: f64,
}

impl FastEr {
    fn new(spec: &TypicalSpec, idx: &PairIndex) -> Option<Self> {
        let TypicalSpec::Er { p, q, n, .. } = spec else { return None };
        let nf = *n as f64;
        Some(Self {
            all: if idx.pair_count() == 64 { u64::MAX } else { (1u64 << idx.pair_count()) - 1 },
            edge_target: p.iter().map(|&x| nf * x / 2.0).collect(),
            vertex_target: q.iter().map(|&t| nf * t).collect(),
            slack: spec.slack(),
        })
    }

    fn typical(&self, g1: &PackedDomain, g2: &PackedDomain) -> bool {
        let (u1, u2) = (g1.union(), g2.union());
        let (n1, n2) = (g1.edge_masks.len(), g2.edge_masks.len());
        let mut dev = 0.0;
        for i1 in 0..=n1 {
            let a = if i1 < n1 { g1.edge_masks[i1] } else { !u1 & self.all };
            for i2 in 0..=n2 {
                if i1 == n1 && i2 == n2 {
                    continue;
                }
                let b = if i2 < n2 { g2.edge_masks[i2] } else { !u2 & self.all };
                let (c, t) = ((a & b).count_ones() as f64, self.edge_target[i1 * (n2 + 1) + i2]);
                if t == 0.0 && c > 0.0 {
                    return false;
                }
                dev += (c - t).abs();
            }
        }
        if dev > self.slack {
            return false;
        }
        let nt2 = g2.vertex_masks.len();
        let mut vdev = 0.0;
        for (t1, &a) in g1.vertex_masks.iter().enumerate() {
            for (t2, &b) in g2.vertex_masks.iter().enumerate() {
                let (c, t) = ((a & b).count_ones() as f64, self.vertex_target[t1 * nt2 + t2]);
                if t == 0.0 && c > 0.0 {
                    return false;
                }
                vdev += (c - t).abs();
            }
        }
        vdev <= self.slack
    }
}

impl TypicalIndex {
    pub fn build(spec: &TypicalSpec) -> Result<Self> {
        let n = spec.n();
        if n > MAX_DECODER_N {
            return Err(Error::Resource(format!("exhaustive decoding supports n <= {MAX_DECODER_N}, got {n}")));
        }
        let idx = PairIndex::new(n)?;
        let firsts = admissible(spec, Side::First, &idx)?;
        let seconds = admissible(spec, Side::Second, &idx)?;
        let checks = firsts.len() as u128 * seconds.len() as u128;
        if checks > MAX_PAIR_CHECKS {
            return Err(Error::Resource(format!("{checks} joint checks exceed the decoder cap {MAX_PAIR_CHECKS}")));
        }
        let marks = spec.marks();
        let mut by_first = vec![Vec::new(); firsts.len()];
        let mut by_second = vec![Vec::new(); seconds.len()];
        let mut size = 0;
        let deg2: Vec<Vec<usize>> = seconds.iter().map(|c| idx.degrees(c.packed.union())).collect();
        let fast = FastEr::new(spec, &idx);
        for (a, g1) in firsts.iter().enumerate() {
            let d1 = idx.degrees(g1.packed.union());
            for (b, g2) in seconds.iter().enumerate() {
                let typical = match &fast {
                    Some(f) => f.typical(&g1.packed, &g2.packed),
                    None => {
                        let cv = joint_counts_packed(&g1.packed, &g2.packed, &idx, marks);
                        spec.check_counts(&cv, &d1, &deg2[b]).typical
                    }
                };
                if typical {
                    by_first[a].push(b as u32);
                    by_second[b].push(a as u32);
                    size += 1;
                }
            }
        }
        let first_id = firsts.iter().enumerate().map(|(i, c)| (c.packed.clone(), i as u32)).collect();
        let second_id = seconds.iter().enumerate().map(|(i, c)| (c.packed.clone(), i as u32)).collect();
        Ok(Self { spec: spec.clone(), idx, firsts, seconds, by_first, by_second, first_id, second_id, size })
    }

    pub fn spec(&self) -> &TypicalSpec {
        &self.spec
    }

    /// Number of typical joint graphs.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn candidates(&self, side: Side) -> &[Candidate] {
        match side {
            Side::First => &self.firsts,
            Side::Second => &self.seconds,
        }
    }

    /// All typical pairs as ids into [`Self::candidates`].
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.by_first.iter().enumerate().flat_map(|(a, list)| list.iter().map(move |&b| (a as u32, b)))
    }

    pub fn marginal_counts(&self) -> (usize, usize) {
        (self.firsts.len(), self.seconds.len())
    }

    fn marks(&self) -> &MarkSpaces {
        self.spec.marks()
    }

    /// Ids of the marginals of `j` among the admissible lists.
    pub fn locate(&self, j: &JointGraph) -> (Option<u32>, Option<u32>) {
        let (p1, p2) = PackedDomain::split_joint(j, &self.idx, self.marks());
        (self.first_id.get(&p1).copied(), self.second_id.get(&p2).copied())
    }

    pub fn joint_graph(&self, a: u32, b: u32) -> JointGraph {
        let g1 = self.firsts[a as usize].packed.to_domain(Side::First, &self.idx);
        let g2 = self.seconds[b as usize].packed.to_domain(Side::Second, &self.idx);
        superpose(&g1, &g2).expect("same vertex set")
    }

    /// Membership masks of both bins over the admissible marginals.
    pub fn bin_masks(&self, binner: &Binner, bins: &(Bin, Bin)) -> (Vec<bool>, Vec<bool>) {
        let m1 = self.firsts.iter().map(|c| binner.matches(Side::First, &bins.0, &c.bytes)).collect();
        let m2 = self.seconds.iter().map(|c| binner.matches(Side::Second, &bins.1, &c.bytes)).collect();
        (m1, m2)
    }

    /// Up to `limit` typical pairs whose marginals both lie in the bins.
    pub fn survivors(&self, m1: &[bool], m2: &[bool], limit: usize) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (a, list) in self.by_first.iter().enumerate() {
            if !m1[a] {
                continue;
            }
            for &b in list {
                if m2[b as usize] {
                    out.push((a as u32, b));
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// A surviving competitor whose marginals both differ from `(s1, s2)`.
    pub(crate) fn has_cross_competitor(&self, m1: &[bool], m2: &[bool], s1: Option<u32>, s2: Option<u32>) -> bool {
        self.by_first.iter().enumerate().any(|(a, list)| {
            m1[a] && Some(a as u32) != s1 && list.iter().any(|&b| Some(b) != s2 && m2[b as usize])
        })
    }

    /// A surviving competitor sharing the first marginal `s1`.
    pub(crate) fn has_second_competitor(&self, m2: &[bool], s1: u32, s2: Option<u32>) -> bool {
        self.by_first[s1 as usize].iter().any(|&b| Some(b) != s2 && m2[b as usize])
    }

    pub(crate) fn has_first_competitor(&self, m1: &[bool], s1: Option<u32>, s2: u32) -> bool {
        self.by_second[s2 as usize].iter().any(|&a| Some(a) != s1 && m1[a as usize])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecodeOutcome {
    Unique(JointGraph),
    NotFound,
    /// At least two typical graphs match the bins.
    Ambiguous,
}

/// Exhaustive typical-set decoder for the bin pair produced by `binner`.
pub fn decode_exhaustive(bins: &(Bin, Bin), binner: &Binner, index: &TypicalIndex) -> DecodeOutcome {
    let (m1, m2) = index.bin_masks(binner, bins);
    match index.survivors(&m1, &m2, 2)[..] {
        [] => DecodeOutcome::NotFound,
        [(a, b)] => DecodeOutcome::Unique(index.joint_graph(a, b)),
        _ => DecodeOutcome::Ambiguous,
    }
}

/// Bins of `j` under `binner` (as [`super::encode`] with an explicit key).
pub fn encode_with(j: &JointGraph, binner: &Binner) -> (Bin, Bin) {
    (
        binner.bin(Side::First, &marginal_bytes(&marginal(j, Side::First))),
        binner.bin(Side::Second, &marginal_bytes(&marginal(j, Side::Second))),
    )
}
