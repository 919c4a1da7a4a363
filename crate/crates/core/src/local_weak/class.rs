//! Canonical byte encodings of rooted marked graphs.
//!
//! Layout: `kind`, `depth` (varint), `shape` (0 tree, 1 general), body.
//!
//! Tree body, recursively from the root: vertex mark, child count, then for each
//! child in increasing `(edge mark, child encoding)` order the edge mark followed
//! by the child encoding.
//!
//! General body: vertex count, then per vertex in canonical order its mark, the
//! number of edges to earlier vertices and those `(earlier index, edge mark)`
//! pairs. The canonical order is the lexicographically smallest encoding found
//! by an individualization-refinement search seeded with (distance to root,
//! vertex mark) colors, so the root is always first.

use std::collections::{HashMap, VecDeque};

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::marked_graph::{MarkSpaces, Side};

/// Budget on leaves of the canonical-labeling search for non-tree neighborhoods.
pub const MAX_SEARCH_LEAVES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    /// Marks are joint indices (see [`MarkSpaces::joint_edge_index`]).
    Joint,
    /// Marks are indices into the first domain's alphabets.
    First,
    Second,
}

impl ClassKind {
    pub fn domain(side: Side) -> Self {
        match side {
            Side::First => ClassKind::First,
            Side::Second => ClassKind::Second,
        }
    }

    fn code(self) -> u8 {
        match self {
            ClassKind::Joint => 0,
            ClassKind::First => 1,
            ClassKind::Second => 2,
        }
    }

    fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(ClassKind::Joint),
            1 => Some(ClassKind::First),
            2 => Some(ClassKind::Second),
            _ => None,
        }
    }
}

/// A rooted marked graph with vertex 0 as the root; marks are integer codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    pub kind: ClassKind,
    pub depth: u32,
    pub vertex_marks: Vec<u32>,
    pub edges: Vec<(usize, usize, u32)>,
}

impl RootedGraph {
    fn adjacency(&self) -> Vec<Vec<(usize, u32)>> {
        let mut adj = vec![Vec::new(); self.vertex_marks.len()];
        for &(u, v, x) in &self.edges {
            adj[u].push((v, x));
            adj[v].push((u, x));
        }
        adj
    }

    /// Restricts to vertices within `depth` of the root (induced subgraph), renumbered in BFS order.
    pub fn truncate(&self) -> RootedGraph {
        let adj = self.adjacency();
        let (order, dist) = bfs(&adj, self.depth);
        let mut local = vec![usize::MAX; adj.len()];
        for (i, &v) in order.iter().enumerate() {
            local[v] = i;
        }
        let _ = dist;
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v, x)| (local[u], local[v], x))
            .collect();
        RootedGraph {
            kind: self.kind,
            depth: self.depth,
            vertex_marks: order.iter().map(|&v| self.vertex_marks[v]).collect(),
            edges,
        }
    }
}

/// BFS from vertex 0 up to `depth`; returns visit order and distances (`u32::MAX` if unreached).
fn bfs(adj: &[Vec<(usize, u32)>], depth: u32) -> (Vec<usize>, Vec<u32>) {
    let mut dist = vec![u32::MAX; adj.len()];
    let mut order = Vec::new();
    if adj.is_empty() {
        return (order, dist);
    }
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        if dist[u] == depth {
            continue;
        }
        for &(w, _) in &adj[u] {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (order, dist)
}

fn put_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn byte(&mut self) -> Result<u8> {
        let b = *self.bytes.get(self.pos).ok_or_else(|| Error::InvalidArgument("truncated class encoding".into()))?;
        self.pos += 1;
        Ok(b)
    }

    fn varint(&mut self) -> Result<u64> {
        let mut x = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            x |= u64::from(b & 0x7f) << shift;
            if b & 0x80 == 0 {
                return Ok(x);
            }
        }
        invalid("overlong varint in class encoding")
    }

    fn small(&mut self) -> Result<u32> {
        u32::try_from(self.varint()?).map_err(|_| Error::InvalidArgument("value out of range".into()))
    }
}

/// Canonical isomorphism class of a depth-`h` rooted marked graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedClass(Vec<u8>);

impl RootedClass {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn kind(&self) -> ClassKind {
        ClassKind::from_code(self.0[0]).expect("validated on construction")
    }

    pub fn depth(&self) -> u32 {
        Reader { bytes: &self.0, pos: 1 }.small().expect("validated on construction")
    }

    /// Accepts only canonical encodings.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        let g = decode(&bytes)?;
        let c = canonicalize(&g)?;
        if c.0 != bytes {
            return invalid("byte string is not a canonical class encoding");
        }
        Ok(c)
    }

    pub fn to_base64(&self) -> String {
        STANDARD.encode(&self.0)
    }

    pub fn from_base64(text: &str) -> Result<Self> {
        let bytes = STANDARD
            .decode(text)
            .map_err(|e| Error::InvalidArgument(format!("bad base64 class: {e}")))?;
        Self::from_bytes(bytes)
    }

    pub fn decode(&self) -> RootedGraph {
        decode(&self.0).expect("validated on construction")
    }

    pub fn vertex_count(&self) -> usize {
        self.decode().vertex_marks.len()
    }

    /// Degree of the root.
    pub fn root_degree(&self) -> usize {
        self.decode().edges.iter().filter(|&&(u, v, _)| u == 0 || v == 0).count()
    }
}

fn decode(bytes: &[u8]) -> Result<RootedGraph> {
    let mut r = Reader { bytes, pos: 0 };
    let kind = ClassKind::from_code(r.byte()?).ok_or_else(|| Error::InvalidArgument("bad class kind".into()))?;
    let depth = r.small()?;
    let shape = r.byte()?;
    let mut g = RootedGraph { kind, depth, vertex_marks: Vec::new(), edges: Vec::new() };
    match shape {
        0 => decode_tree(&mut r, &mut g, None)?,
        1 => {
            let k = r.small()? as usize;
            for i in 0..k {
                g.vertex_marks.push(r.small()?);
                let back = r.small()? as usize;
                for _ in 0..back {
                    let j = r.small()? as usize;
                    if j >= i {
                        return invalid("edge to a later vertex in class encoding");
                    }
                    g.edges.push((j, i, r.small()?));
                }
            }
        }
        _ => return invalid("bad class shape"),
    }
    if r.pos != bytes.len() {
        return invalid("trailing bytes in class encoding");
    }
    Ok(g)
}

fn decode_tree(r: &mut Reader, g: &mut RootedGraph, parent: Option<(usize, u32)>) -> Result<()> {
    let me = g.vertex_marks.len();
    g.vertex_marks.push(r.small()?);
    if let Some((p, x)) = parent {
        g.edges.push((p, me, x));
    }
    let children = r.small()?;
    for _ in 0..children {
        let x = r.small()?;
        decode_tree(r, g, Some((me, x)))?;
    }
    Ok(())
}

fn header(kind: ClassKind, depth: u32, shape: u8) -> Vec<u8> {
    let mut out = vec![kind.code()];
    put_varint(&mut out, u64::from(depth));
    out.push(shape);
    out
}

/// Canonical class of `g` after truncation to its depth.
pub fn canonicalize(g: &RootedGraph) -> Result<RootedClass> {
    let g = g.truncate();
    let adj = g.adjacency();
    if g.edges.len() + 1 == g.vertex_marks.len() {
        let mut out = header(g.kind, g.depth, 0);
        out.extend(tree_code(&adj, &g.vertex_marks, 0, usize::MAX));
        return Ok(RootedClass(out));
    }
    let mut out = header(g.kind, g.depth, 1);
    out.extend(general_code(&g, &adj)?);
    Ok(RootedClass(out))
}

pub(crate) fn canonical_tree(g: &RootedGraph) -> RootedClass {
    debug_assert_eq!(g.edges.len() + 1, g.vertex_marks.len());
    canonicalize(g).expect("trees always canonicalize")
}

fn tree_code(adj: &[Vec<(usize, u32)>], marks: &[u32], v: usize, parent: usize) -> Vec<u8> {
    let mut children: Vec<(u32, Vec<u8>)> = adj[v]
        .iter()
        .filter(|&&(w, _)| w != parent)
        .map(|&(w, x)| (x, tree_code(adj, marks, w, v)))
        .collect();
    children.sort();
    let mut out = Vec::new();
    put_varint(&mut out, u64::from(marks[v]));
    put_varint(&mut out, children.len() as u64);
    for (x, code) in children {
        put_varint(&mut out, u64::from(x));
        out.extend(code);
    }
    out
}

/// Edge-mark lookup for the general search; `None` means no edge.
struct Dense {
    k: usize,
    cell: Vec<Option<u32>>,
    marks: Vec<u32>,
}

impl Dense {
    fn edge(&self, u: usize, v: usize) -> Option<u32> {
        self.cell[u * self.k + v]
    }
}

/// Refines a coloring to the coarsest equitable refinement. Colors are ranks
/// of isomorphism-invariant signatures, so the result is invariant too.
fn refine(d: &Dense, colors: &mut Vec<usize>) {
    let k = d.k;
    loop {
        let before = colors.iter().copied().max().map_or(0, |m| m + 1);
        let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..k)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> =
                    (0..k).filter_map(|w| d.edge(v, w).map(|x| (colors[w], x))).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut uniq: Vec<&(usize, Vec<(usize, u32)>)> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        let rank: HashMap<&(usize, Vec<(usize, u32)>), usize> =
            uniq.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        *colors = sigs.iter().map(|s| rank[s]).collect();
        if uniq.len() == before {
            return;
        }
    }
}

fn encode_order(d: &Dense, order: &[usize]) -> Vec<u8> {
    let mut pos = vec![0; d.k];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut out = Vec::new();
    put_varint(&mut out, d.k as u64);
    for (i, &v) in order.iter().enumerate() {
        put_varint(&mut out, u64::from(d.marks[v]));
        let mut back: Vec<(usize, u32)> =
            (0..d.k).filter(|&w| pos[w] < i).filter_map(|w| d.edge(v, w).map(|x| (pos[w], x))).collect();
        back.sort_unstable();
        put_varint(&mut out, back.len() as u64);
        for (j, x) in back {
            put_varint(&mut out, j as u64);
            put_varint(&mut out, u64::from(x));
        }
    }
    out
}

/// `u` and `w` are interchangeable: same mark and the same edge (mark) to every other vertex.
fn twins(d: &Dense, u: usize, w: usize) -> bool {
    d.marks[u] == d.marks[w] && (0..d.k).all(|x| x == u || x == w || d.edge(u, x) == d.edge(w, x))
}

fn search(d: &Dense, colors: Vec<usize>, best: &mut Option<Vec<u8>>, leaves: &mut usize) -> Result<()> {
    let ncolors = colors.iter().copied().max().map_or(0, |m| m + 1);
    if ncolors == d.k {
        *leaves += 1;
        if *leaves > MAX_SEARCH_LEAVES {
            return Err(Error::Resource(format!(
                "canonical labeling exceeded {MAX_SEARCH_LEAVES} search leaves"
            )));
        }
        let mut order: Vec<usize> = (0..d.k).collect();
        order.sort_by_key(|&v| colors[v]);
        let code = encode_order(d, &order);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return Ok(());
    }
    // first non-singleton cell
    let mut size = vec![0usize; ncolors];
    for &c in &colors {
        size[c] += 1;
    }
    let target = (0..ncolors).find(|&c| size[c] > 1).expect("not discrete");
    let cell: Vec<usize> = (0..d.k).filter(|&v| colors[v] == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cell {
        if tried.iter().any(|&u| twins(d, u, v)) {
            continue;
        }
        tried.push(v);
        // individualize v: it takes the cell's color, the rest of the cell moves just after
        let mut next: Vec<usize> = colors.iter().map(|&c| if c > target { 2 * c + 1 } else { 2 * c }).collect();
        for &w in &cell {
            if w != v {
                next[w] = 2 * target + 1;
            }
        }
        refine(d, &mut next);
        search(d, next, best, leaves)?;
    }
    Ok(())
}

fn general_code(g: &RootedGraph, adj: &[Vec<(usize, u32)>]) -> Result<Vec<u8>> {
    let k = g.vertex_marks.len();
    let mut cell = vec![None; k * k];
    for &(u, v, x) in &g.edges {
        cell[u * k + v] = Some(x);
        cell[v * k + u] = Some(x);
    }
    let d = Dense { k, cell, marks: g.vertex_marks.clone() };
    let (_, dist) = bfs(adj, g.depth);
    let keys: Vec<(u32, u32)> = (0..k).map(|v| (dist[v], g.vertex_marks[v])).collect();
    let mut uniq = keys.clone();
    uniq.sort_unstable();
    uniq.dedup();
    let mut colors: Vec<usize> = keys.iter().map(|key| uniq.binary_search(key).expect("present")).collect();
    refine(&d, &mut colors);
    let mut best = None;
    let mut leaves = 0;
    search(&d, colors, &mut best, &mut leaves)?;
    Ok(best.expect("at least one leaf"))
}

/// Projects a joint class onto one domain: marks are projected, edges whose
/// mark is the placeholder of that domain are removed, and the result is
/// re-truncated around the root. A class already in that domain is returned unchanged.
pub fn marginal_class(c: &RootedClass, side: Side, marks: &MarkSpaces) -> Result<RootedClass> {
    let target = ClassKind::domain(side);
    match c.kind() {
        k if k == target => return Ok(c.clone()),
        ClassKind::Joint => {}
        other => return invalid(format!("cannot project a {other:?} class onto domain {}", side.index())),
    }
    let g = c.decode();
    let vertex_marks = g
        .vertex_marks
        .iter()
        .map(|&t| {
            let pair = marks.joint_vertex_mark(t as usize).ok_or_else(|| Error::InvalidArgument("vertex code outside alphabet".into()))?;
            Ok(u32::from(pair.get(side)))
        })
        .collect::<Result<Vec<u32>>>()?;
    let mut edges = Vec::new();
    for &(u, v, x) in &g.edges {
        let pair = marks.joint_edge_mark(x as usize).ok_or_else(|| Error::InvalidArgument("edge code outside alphabet".into()))?;
        if let Some(m) = pair.get(side) {
            edges.push((u, v, u32::from(m)));
        }
    }
    canonicalize(&RootedGraph { kind: target, depth: g.depth, vertex_marks, edges })
}
