use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::class::{canonical_tree, ClassKind, RootedClass, RootedGraph};
use crate::ensembles::ErModel;
use crate::error::{invalid, Error, Result};
use crate::marked_graph::Side;

const SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Pooled full sweeps over `samples` graphs on `n` vertices.
    Empirical { n: usize, samples: usize },
    LimitSampled { samples: usize },
    Exact,
}

/// A probability law on depth-`h` rooted classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDist", into = "RawDist")]
pub struct NeighborhoodDist {
    depth: u32,
    provenance: Provenance,
    probs: BTreeMap<RootedClass, f64>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    class: String,
    prob: f64,
}

#[derive(Serialize, Deserialize)]
struct RawDist {
    depth: u32,
    provenance: Provenance,
    classes: Vec<RawEntry>,
}

impl From<NeighborhoodDist> for RawDist {
    fn from(d: NeighborhoodDist) -> Self {
        RawDist {
            depth: d.depth,
            provenance: d.provenance,
            classes: d.probs.iter().map(|(c, &prob)| RawEntry { class: c.to_base64(), prob }).collect(),
        }
    }
}

impl TryFrom<RawDist> for NeighborhoodDist {
    type Error = Error;

    fn try_from(raw: RawDist) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for e in raw.classes {
            let c = RootedClass::from_base64(&e.class)?;
            if probs.insert(c, e.prob).is_some() {
                return invalid("duplicate class in distribution");
            }
        }
        NeighborhoodDist::new(raw.depth, raw.provenance, probs)
    }
}

impl NeighborhoodDist {
    pub fn new(depth: u32, provenance: Provenance, probs: BTreeMap<RootedClass, f64>) -> Result<Self> {
        if let Some(c) = probs.keys().find(|c| c.depth() != depth) {
            return invalid(format!("class of depth {} in a depth-{depth} distribution", c.depth()));
        }
        if probs.values().any(|&p| !(0.0..=1.0 + SUM_TOL).contains(&p)) {
            return invalid("probabilities must lie in [0, 1]");
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return invalid(format!("probabilities sum to {total}"));
        }
        Ok(Self { depth, provenance, probs })
    }

    pub fn from_counts(depth: u32, provenance: Provenance, counts: BTreeMap<RootedClass, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return invalid("no observations");
        }
        let probs = counts.into_iter().map(|(c, k)| (c, k as f64 / total as f64)).collect();
        Self::new(depth, provenance, probs)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn prob(&self, c: &RootedClass) -> f64 {
        self.probs.get(c).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RootedClass, f64)> {
        self.probs.iter().map(|(c, &p)| (c, p))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Pushes the law forward through `f`.
    pub fn map_classes(&self, f: impl Fn(&RootedClass) -> Result<RootedClass>) -> Result<Self> {
        let mut out: BTreeMap<RootedClass, f64> = BTreeMap::new();
        for (c, p) in self.iter() {
            *out.entry(f(c)?).or_default() += p;
        }
        let depth = out.keys().next().map_or(self.depth, |c| c.depth());
        Self::new(depth, self.provenance, out)
    }
}

/// Total variation distance `½ Σ |a − b|` over the union of supports.
pub fn dist_tv(a: &NeighborhoodDist, b: &NeighborhoodDist) -> Result<f64> {
    if a.depth != b.depth {
        return invalid(format!("depth mismatch: {} vs {}", a.depth, b.depth));
    }
    let mut sum: f64 = a.iter().map(|(c, p)| (p - b.prob(c)).abs()).sum();
    sum += b.iter().filter(|(c, _)| !a.probs.contains_key(*c)).map(|(_, p)| p).sum::<f64>();
    Ok((sum / 2.0).min(1.0))
}

/// Mass allowed to escape the enumeration before the exact law is refused.
const EXACT_TAIL: f64 = 1e-10;
/// Partial products below this are not expanded further.
const BRANCH_FLOOR: f64 = 1e-20;

fn poisson_pmf(lambda: f64, k: u32) -> f64 {
    (-lambda + k as f64 * lambda.ln() - crate::entropy::ln_factorial(u64::from(k))).exp()
}

/// Exact depth-0 or depth-1 law of a marked Poisson Galton–Watson tree with
/// edge intensities `p` and vertex law `q` (indexed by mark codes).
///
/// At depth 1 the number of children reached through edge mark `x` with mark
/// `θ` is Poisson(`p_x q_θ`), independently over `(x, θ)`.
pub fn poisson_tree_law(kind: ClassKind, p: &[f64], q: &[f64], depth: u32) -> Result<NeighborhoodDist> {
    if depth > 1 {
        return invalid("exact Poisson tree law is available for depth 0 and 1 only");
    }
    let cells: Vec<(u32, u32, f64)> = if depth == 0 {
        Vec::new()
    } else {
        p.iter()
            .enumerate()
            .flat_map(|(x, &px)| q.iter().enumerate().map(move |(t, &qt)| (x as u32, t as u32, px * qt)))
            .filter(|c| c.2 > 0.0)
            .collect()
    };
    let mut acc: BTreeMap<RootedClass, f64> = BTreeMap::new();
    let mut counts = vec![0u32; cells.len()];
    for (t0, &q0) in q.iter().enumerate() {
        if q0 > 0.0 {
            enumerate_stars(kind, t0 as u32, &cells, 0, q0, &mut counts, &mut acc);
        }
    }
    let total: f64 = acc.values().sum();
    if 1.0 - total > EXACT_TAIL {
        return Err(Error::Resource(format!(
            "exact law enumeration left {:.3e} mass unaccounted",
            1.0 - total
        )));
    }
    acc.values_mut().for_each(|p| *p /= total);
    NeighborhoodDist::new(depth, Provenance::Exact, acc)
}

fn enumerate_stars(
    kind: ClassKind,
    root: u32,
    cells: &[(u32, u32, f64)],
    i: usize,
    prob: f64,
    counts: &mut Vec<u32>,
    acc: &mut BTreeMap<RootedClass, f64>,
) {
    if i == cells.len() {
        let mut g = RootedGraph { kind, depth: if cells.is_empty() { 0 } else { 1 }, vertex_marks: vec![root], edges: vec![] };
        for (&(x, t, _), &k) in cells.iter().zip(counts.iter()) {
            for _ in 0..k {
                g.edges.push((0, g.vertex_marks.len(), x));
                g.vertex_marks.push(t);
            }
        }
        *acc.entry(canonical_tree(&g)).or_default() += prob;
        return;
    }
    let lambda = cells[i].2;
    let mut k = 0u32;
    loop {
        let pk = poisson_pmf(lambda, k);
        if prob * pk >= BRANCH_FLOOR {
            counts[i] = k;
            enumerate_stars(kind, root, cells, i + 1, prob * pk, counts, acc);
        }
        // P(X > k) <= p_k λ / (k + 1 − λ) once k + 1 > λ
        let next = f64::from(k) + 1.0;
        if next > lambda && prob * pk * lambda / (next - lambda) < BRANCH_FLOOR {
            break;
        }
        k += 1;
    }
    counts[i] = 0;
}

/// Exact depth-`h` (h ≤ 1) law of the joint ER limit tree.
pub fn er_limit_law(model: &ErModel, depth: u32) -> Result<NeighborhoodDist> {
    poisson_tree_law(ClassKind::Joint, model.p(), model.q(), depth)
}

/// Exact depth-`h` (h ≤ 1) law of a marginal ER limit tree.
pub fn er_marginal_limit_law(model: &ErModel, side: Side, depth: u32) -> Result<NeighborhoodDist> {
    poisson_tree_law(ClassKind::domain(side), &model.p_marginal(side), &model.q_marginal(side), depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(k: usize) -> RootedClass {
        let g = RootedGraph {
            kind: ClassKind::First,
            depth: 1,
            vertex_marks: vec![0; k + 1],
            edges: (1..=k).map(|i| (0, i, 0)).collect(),
        };
        canonical_tree(&g)
    }

    fn law(pairs: &[(usize, f64)]) -> NeighborhoodDist {
        let probs = pairs.iter().map(|&(k, p)| (star(k), p)).collect();
        NeighborhoodDist::new(1, Provenance::Exact, probs).unwrap()
    }

    #[test]
    fn tv_examples() {
        let a = law(&[(0, 0.6), (1, 0.4)]);
        assert_eq!(dist_tv(&a, &a).unwrap(), 0.0);
        assert!((dist_tv(&a, &law(&[(0, 0.5), (1, 0.5)])).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(dist_tv(&a, &law(&[(2, 1.0)])).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_mass() {
        let probs = [(star(0), 0.5)].into_iter().collect();
        assert!(NeighborhoodDist::new(1, Provenance::Exact, probs).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = law(&[(0, 0.25), (3, 0.75)]);
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.contains("\"classes\""));
        let b: NeighborhoodDist = serde_json::from_str(&text).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn poisson_one_star_law() {
        let d = poisson_tree_law(ClassKind::First, &[1.0], &[1.0], 1).unwrap();
        for k in 0..8u32 {
            let want = (-1.0f64).exp() / (1..=k).map(f64::from).product::<f64>();
            assert!((d.prob(&star(k as usize)) - want).abs() < 1e-12);
        }
    }
}
