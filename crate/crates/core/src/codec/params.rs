use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::entropy::RateTuple;
use crate::error::{invalid, Result};
use crate::marked_graph::packed::{PackedDomain, PairIndex};
use crate::marked_graph::{marginal, DomainGraph, JointGraph, Side};
use crate::rng::SeedStream;

/// Largest `ln L` for which bins are materialized as integers.
pub const MATERIALIZE_LIMIT: f64 = 62.0 * std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub rate: RateTuple,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BinSpace {
    /// Bins are integers in `0..size`.
    Materialized { size: u64 },
    /// Two distinct graphs share a bin with probability `exp(-log_size)`, decided pairwise.
    Lazy { log_size: f64 },
}

impl CodeParams {
    pub fn new(n: usize, rate: RateTuple, seed: u64) -> Result<Self> {
        if n < 1 {
            return invalid("n must be positive");
        }
        let p = Self { n, rate, seed };
        for side in [Side::First, Side::Second] {
            let l = p.log_l(side);
            if !(l >= 0.0 && l.is_finite()) {
                return invalid(format!("ln L{} = {l} must be finite and nonnegative", side.index()));
            }
        }
        Ok(p)
    }

    /// `ln Lᵢ = αᵢ n ln n + Rᵢ n`.
    pub fn log_l(&self, side: Side) -> f64 {
        let n = self.n as f64;
        let (alpha, r) = match side {
            Side::First => (self.rate.alpha1, self.rate.r1),
            Side::Second => (self.rate.alpha2, self.rate.r2),
        };
        alpha * n * n.ln() + r * n
    }

    pub fn bin_space(&self, side: Side) -> BinSpace {
        let log_size = self.log_l(side);
        if log_size <= MATERIALIZE_LIMIT {
            // a hair of headroom so exact powers such as 2^16 are not floored to 2^16 - 1
            let size = (log_size.exp() * (1.0 + 1e-12)).floor().max(1.0) as u64;
            BinSpace::Materialized { size }
        } else {
            BinSpace::Lazy { log_size }
        }
    }
}

/// Output of one encoder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bin {
    Index(u64),
    /// In lazy mode the bin is only defined through pairwise collision queries,
    /// so it carries the canonical bytes of the encoded marginal.
    Lazy(Vec<u8>),
}

fn put_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let b = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

/// Canonical serialization of a labeled domain graph: `n`, vertex marks, then
/// `(u, v, mark)` for each edge in lexicographic pair order.
pub fn marginal_bytes(g: &DomainGraph) -> Vec<u8> {
    let gr = g.graph();
    let mut out = Vec::new();
    put_varint(&mut out, gr.n() as u64);
    for &t in gr.vertex_marks() {
        put_varint(&mut out, u64::from(t));
    }
    let mut edges: Vec<(usize, usize, u16)> = gr.edges().map(|(u, v, x)| (u.min(v), u.max(v), x)).collect();
    edges.sort_unstable();
    for (u, v, x) in edges {
        put_varint(&mut out, u as u64);
        put_varint(&mut out, v as u64);
        put_varint(&mut out, u64::from(x));
    }
    out
}

/// Same bytes as [`marginal_bytes`] for the packed form.
pub(crate) fn packed_bytes(g: &PackedDomain, idx: &PairIndex) -> Vec<u8> {
    let mut out = Vec::new();
    put_varint(&mut out, idx.n() as u64);
    for v in 0..idx.n() {
        let t = g.vertex_masks.iter().position(|m| m >> v & 1 == 1).expect("every vertex is marked");
        put_varint(&mut out, t as u64);
    }
    for i in 0..idx.pair_count() {
        if let Some(x) = g.edge_masks.iter().position(|m| m >> i & 1 == 1) {
            let (u, v) = idx.pair(i);
            put_varint(&mut out, u as u64);
            put_varint(&mut out, v as u64);
            put_varint(&mut out, x as u64);
        }
    }
    out
}

/// Keyed random binning of both marginals.
#[derive(Debug, Clone)]
pub struct Binner {
    keys: [[u8; 32]; 2],
    spaces: [BinSpace; 2],
}

fn digest_u128(h: Sha256) -> u128 {
    let d = h.finalize();
    u128::from_le_bytes(d[..16].try_into().expect("16 bytes"))
}

impl Binner {
    pub fn new(params: &CodeParams) -> Self {
        Self::with_key(params, SeedStream::new(params.seed).split("binning"))
    }

    pub fn with_key(params: &CodeParams, key: SeedStream) -> Self {
        let keys = [key.split("f1").key_bytes(), key.split("f2").key_bytes()];
        Self { keys, spaces: [params.bin_space(Side::First), params.bin_space(Side::Second)] }
    }

    fn space(&self, side: Side) -> BinSpace {
        self.spaces[side.index() as usize - 1]
    }

    fn keyed(&self, side: Side, tag: &[u8]) -> Sha256 {
        let mut h = Sha256::new();
        h.update(self.keys[side.index() as usize - 1]);
        h.update(tag);
        h
    }

    pub fn bin(&self, side: Side, bytes: &[u8]) -> Bin {
        match self.space(side) {
            BinSpace::Materialized { size } => {
                let mut h = self.keyed(side, b"bin");
                h.update(bytes);
                Bin::Index((digest_u128(h) % u128::from(size)) as u64)
            }
            BinSpace::Lazy { .. } => Bin::Lazy(bytes.to_vec()),
        }
    }

    /// Whether the marginal with canonical `bytes` lands in `bin`.
    pub fn matches(&self, side: Side, bin: &Bin, bytes: &[u8]) -> bool {
        match (self.space(side), bin) {
            (BinSpace::Materialized { .. }, Bin::Index(_)) => self.bin(side, bytes) == *bin,
            (BinSpace::Lazy { log_size }, Bin::Lazy(src)) => {
                if src.as_slice() == bytes {
                    return true;
                }
                let (a, b) = if src.as_slice() < bytes { (src.as_slice(), bytes) } else { (bytes, src.as_slice()) };
                let mut h = self.keyed(side, b"pair");
                h.update((a.len() as u64).to_le_bytes());
                h.update(a);
                h.update(b);
                let u = (digest_u128(h) as f64 + 0.5) * 2f64.powi(-128);
                u.ln() < -log_size
            }
            _ => false,
        }
    }
}

/// Bins of both marginals of `j`.
pub fn encode(j: &JointGraph, params: &CodeParams) -> (Bin, Bin) {
    let b = Binner::new(params);
    (
        b.bin(Side::First, &marginal_bytes(&marginal(j, Side::First))),
        b.bin(Side::Second, &marginal_bytes(&marginal(j, Side::Second))),
    )
}
