use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::er::sample_vertex_marks;
use super::model::CmModel;
use crate::entropy::{ln_factorial, log_multinomial, s_func};
use crate::error::{invalid, Error, Result};
use crate::marked_graph::{class_counts, joint_counts, JointGraph, MarkedGraph};
use crate::oracles::{check_degree_input, enumerate_with_degrees, MAX_DEGREE_ENUMERATION_N};
use crate::rng::SeedStream;

pub const PAIRING_RETRY_CAP: usize = 1_000_000;

/// An unmarked simple graph.
pub type SimpleGraph = MarkedGraph<(), ()>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSeq {
    d: Vec<usize>,
}

impl DegreeSeq {
    pub fn new(d: Vec<usize>) -> Result<Self> {
        if d.iter().sum::<usize>() % 2 == 1 {
            return invalid("degree sum must be even");
        }
        Ok(Self { d })
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// `m_n`, half the degree sum.
    pub fn edge_count(&self) -> usize {
        self.d.iter().sum::<usize>() / 2
    }

    /// `c_k` for `k = 0..=delta`.
    pub fn class_counts(&self, delta: usize) -> Vec<usize> {
        let mut c = class_counts(&self.d);
        c.resize(c.len().max(delta + 1), 0);
        c
    }
}

fn slack_l1(c: &[usize], r: &[f64], n: f64) -> f64 {
    c.iter().zip(r).map(|(&ck, &rk)| (ck as f64 - n * rk).abs()).sum()
}

/// The deterministic degree sequence `d⃗⁽ⁿ⁾` of the configuration model.
///
/// Class sizes start at `round(n r_k)`. The total is then repaired one vertex
/// at a time (adding to the most under-filled class with `r_k > 0`, removing
/// from the most over-filled nonempty class), and an odd degree sum is fixed by
/// moving one vertex to an adjacent class, preferring targets with `r > 0` and
/// the smallest resulting deviation. Output is sorted in decreasing order.
pub fn build_degree_sequence(model: &CmModel, n: usize) -> Result<DegreeSeq> {
    let delta = model.max_degree();
    let k_slack = model.slack();
    let min_n = (2.0 * delta as f64 / k_slack).powi(2);
    if (n as f64) < min_n {
        return invalid(format!("n = {n} is below the minimum (2Δ/K)² = {min_n}"));
    }
    let r = model.r();
    let nf = n as f64;
    let mut c: Vec<usize> = r.iter().map(|&rk| (nf * rk).round() as usize).collect();
    let dev = |c: &[usize], k: usize| c[k] as f64 - nf * r[k];

    while c.iter().sum::<usize>() < n {
        let k = (0..=delta)
            .filter(|&k| r[k] > 0.0)
            .min_by(|&a, &b| dev(&c, a).total_cmp(&dev(&c, b)))
            .expect("r has positive mass");
        c[k] += 1;
    }
    while c.iter().sum::<usize>() > n {
        let k = (0..=delta)
            .filter(|&k| c[k] > 0)
            .max_by(|&a, &b| dev(&c, a).total_cmp(&dev(&c, b)).then(b.cmp(&a)))
            .expect("nonempty classes");
        c[k] -= 1;
    }

    let degree_sum: usize = c.iter().enumerate().map(|(k, &ck)| k * ck).sum();
    if degree_sum % 2 == 1 {
        let mut best: Option<(bool, f64, usize, usize)> = None;
        for k in (0..=delta).filter(|&k| c[k] > 0) {
            for t in [k.wrapping_sub(1), k + 1] {
                if t > delta {
                    continue;
                }
                let mut trial = c.clone();
                trial[k] -= 1;
                trial[t] += 1;
                // rank: r-positive target first, then smaller deviation
                let cand = (r[t] <= 0.0, slack_l1(&trial, r, nf), k, t);
                let better = match &best {
                    None => true,
                    Some(b) => (cand.0, cand.1) < (b.0, b.1),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let (_, _, k, t) = best.ok_or_else(|| Error::Internal("no parity repair available".into()))?;
        c[k] -= 1;
        c[t] += 1;
    }

    let slack = slack_l1(&c, r, nf);
    if slack > k_slack * nf.sqrt() {
        return Err(Error::Internal(format!(
            "degree-sequence repair exceeded the slack bound: {slack} > {}",
            k_slack * nf.sqrt()
        )));
    }
    let mut d = Vec::with_capacity(n);
    for k in (0..=delta).rev() {
        d.extend(std::iter::repeat_n(k, c[k]));
    }
    DegreeSeq::new(d)
}

/// A uniform simple graph among those whose degree-class counts match `d`.
///
/// The sequence is first permuted uniformly at random, then half-edges are
/// paired uniformly and the pairing is rejected if it creates a loop or a
/// multi-edge.
pub fn sample_simple_with_degrees(d: &[usize], stream: &SeedStream) -> Result<SimpleGraph> {
    check_degree_input(d)?;
    let mut rng = stream.split("permutation").rng();
    let mut perm = d.to_vec();
    perm.shuffle(&mut rng);

    let mut stubs: Vec<usize> = Vec::with_capacity(perm.iter().sum());
    for (v, &k) in perm.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v, k));
    }
    let mut rng = stream.split("pairing").rng();
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    'attempt: for _ in 0..PAIRING_RETRY_CAP {
        stubs.shuffle(&mut rng);
        seen.clear();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        let mut g = MarkedGraph::empty(vec![(); d.len()]);
        for &(u, v) in &seen {
            g.insert_edge(u, v, ()).expect("simple by construction");
        }
        return Ok(g);
    }
    Err(Error::Resource(format!("pairing rejected {PAIRING_RETRY_CAP} times")))
}

/// Draws a graph from the marked configuration model.
pub fn sample_cm(model: &CmModel, n: usize, stream: &SeedStream) -> Result<JointGraph> {
    let d = build_degree_sequence(model, n)?;
    let skeleton = sample_simple_with_degrees(d.as_slice(), &stream.split("structure"))?;
    let marks = model.marks();
    let vm = sample_vertex_marks(
        model.q(),
        &marks.joint_vertex_marks(),
        n,
        &mut stream.split("vertex-marks").rng(),
    );
    let edge_marks = marks.joint_edge_marks();
    let dist = WeightedIndex::new(model.gamma()).expect("validated distribution");
    let mut rng = stream.split("edge-marks").rng();
    let mut g = MarkedGraph::empty(vm);
    for (u, v, ()) in skeleton.edges() {
        g.insert_edge(u, v, edge_marks[dist.sample(&mut rng)]).expect("simple skeleton");
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    /// `|𝒢_d|` by exhaustive counting (`n ≤ 10`).
    Exact,
    /// `|𝒢_d|` replaced by its `(b/2) ln n + n(−s(d̄) − E[ln Y!])` asymptote.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmLogProb {
    pub log_prob: f64,
    pub mode: CountMode,
}

/// `ln |𝒢_d|` approximated by the degree-sequence count asymptote.
pub fn asymptotic_log_graph_count(d: &[usize]) -> Result<f64> {
    let n = d.len() as f64;
    let b: usize = d.iter().sum();
    if b == 0 {
        return Ok(0.0);
    }
    let mean = b as f64 / n;
    let e_log_fact: f64 = d.iter().map(|&k| ln_factorial(k as u64)).sum::<f64>() / n;
    Ok(b as f64 / 2.0 * n.ln() + n * (-s_func(mean)? - e_log_fact))
}

/// `ln P(j)` under the configuration model.
///
/// The degree classes of `j` must match those of the model's degree sequence.
pub fn log_prob_cm(model: &CmModel, j: &JointGraph, mode: CountMode) -> Result<CmLogProb> {
    let marks = model.marks();
    j.validate(marks)?;
    let n = j.n();
    let target = build_degree_sequence(model, n)?;
    let delta = model.max_degree();
    let dg = j.degree_sequence();
    let mut observed = class_counts(&dg);
    observed.resize(observed.len().max(delta + 1), 0);
    let expected = target.class_counts(delta);
    if observed != expected {
        return invalid(format!(
            "degree classes {observed:?} differ from the model's {expected:?}"
        ));
    }
    let c: Vec<u64> = expected.iter().map(|&x| x as u64).collect();
    let log_sequences = log_multinomial(n as u64, &c)?;
    let log_graphs = match mode {
        CountMode::Exact => {
            if n > MAX_DEGREE_ENUMERATION_N {
                return Err(Error::Resource(format!(
                    "exact mode needs n <= {MAX_DEGREE_ENUMERATION_N}, got {n}"
                )));
            }
            (enumerate_with_degrees(&dg)? as f64).ln()
        }
        CountMode::Asymptotic => asymptotic_log_graph_count(&dg)?,
    };
    let cv = joint_counts(j, marks);
    let mut log_marks = 0.0;
    for (&m, &g) in cv.edge_counts.iter().zip(model.gamma()) {
        if m > 0 {
            if g == 0.0 {
                return Ok(CmLogProb { log_prob: f64::NEG_INFINITY, mode });
            }
            log_marks += m as f64 * g.ln();
        }
    }
    for (&u, &q) in cv.vertex_counts.iter().zip(model.q()) {
        if u > 0 {
            if q == 0.0 {
                return Ok(CmLogProb { log_prob: f64::NEG_INFINITY, mode });
            }
            log_marks += u as f64 * q.ln();
        }
    }
    Ok(CmLogProb { log_prob: -(log_sequences + log_graphs) + log_marks, mode })
}
