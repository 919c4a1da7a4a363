use serde::{Deserialize, Serialize};

use crate::ensembles::{CmModel, ErModel};
use crate::entropy::{entropy_unchecked, ln_factorial, log_multinomial, s_unchecked, thinning_law};
use crate::error::{invalid, Result};
use crate::marked_graph::{MarkSpaces, Side};

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

fn check_counts(marks: &MarkSpaces, n: u64, m: &[u64], u: &[u64]) -> Result<()> {
    if m.len() != marks.joint_edge_count() || u.len() != marks.joint_vertex_count() {
        return invalid("count vectors must be indexed by the joint alphabets");
    }
    if u.iter().sum::<u64>() != n {
        return invalid(format!("vertex counts sum to {}, expected n = {n}", u.iter().sum::<u64>()));
    }
    if m.iter().sum::<u64>() > pairs(n) {
        return invalid("more edges than vertex pairs");
    }
    Ok(())
}

/// `ln A₁ = ln multinomial(n; u) + ln multinomial(C(n,2); m)`.
pub fn typical_bound_a1(model: &ErModel, n: u64, m: &[u64], u: &[u64]) -> Result<f64> {
    check_counts(model.marks(), n, m, u)?;
    Ok(log_multinomial(n, u)? + log_multinomial(pairs(n), m)?)
}

/// The three factors of `A₂`, as logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2Terms {
    /// Splitting each first-domain edge mark class by second-domain mark (∘₂ included).
    pub first_edges: f64,
    /// Placing `(∘₁, x₂)` edges among the pairs without a first-domain edge.
    pub new_edges: f64,
    /// Splitting each first-domain vertex mark class by second-domain mark.
    pub vertices: f64,
}

impl A2Terms {
    pub fn total(&self) -> f64 {
        self.first_edges + self.new_edges + self.vertices
    }
}

/// Per first-domain mark, the joint counts with that first coordinate, in second-alphabet order (∘₂ last).
fn rows_by_first(marks: &MarkSpaces, counts: &[u64]) -> Vec<Vec<u64>> {
    let n1 = marks.edge_alphabet(Side::First).len();
    let n2 = marks.edge_alphabet(Side::Second).len();
    let mut rows = vec![vec![0u64; n2 + 1]; n1 + 1];
    for (i, &c) in counts.iter().enumerate() {
        let x = marks.joint_edge_mark(i).expect("joint index");
        let r = x.first().map_or(n1, usize::from);
        let col = x.second().map_or(n2, usize::from);
        rows[r][col] += c;
    }
    rows
}

fn vertex_rows(marks: &MarkSpaces, u: &[u64]) -> Vec<Vec<u64>> {
    let t1 = marks.vertex_alphabet(Side::First).len();
    let t2 = marks.vertex_alphabet(Side::Second).len();
    let mut rows = vec![vec![0u64; t2]; t1];
    for (i, &c) in u.iter().enumerate() {
        let t = marks.joint_vertex_mark(i).expect("joint index");
        rows[usize::from(t.first)][usize::from(t.second)] += c;
    }
    rows
}

fn split_rows(rows: &[Vec<u64>]) -> Result<f64> {
    rows.iter().map(|row| log_multinomial(row.iter().sum(), row)).sum()
}

/// Logarithms of the three factors of `A₂(m, u)` for the ER ensemble.
pub fn cond_bound_a2_er(model: &ErModel, n: u64, m: &[u64], u: &[u64]) -> Result<A2Terms> {
    let marks = model.marks();
    check_counts(marks, n, m, u)?;
    let rows = rows_by_first(marks, m);
    let (first, last) = rows.split_at(rows.len() - 1);
    let on_first: u64 = first.iter().flatten().sum();
    let placeholder_row = &last[0];
    let new_parts = &placeholder_row[..placeholder_row.len() - 1];
    Ok(A2Terms {
        first_edges: split_rows(first)?,
        new_edges: log_multinomial(pairs(n) - on_first, new_parts)?,
        vertices: split_rows(&vertex_rows(marks, u))?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondBoundCm {
    pub n: u64,
    /// Logarithms of: degree sequences of the added graph, graphs with such a
    /// degree sequence, second-domain edge marks, second-domain vertex marks.
    pub terms: [f64; 4],
    pub bound: f64,
    /// `(bound − n (d₁,₂ − dᵢ)/2 ln n) / n`.
    pub normalized: f64,
    /// Limit of `normalized`: the conditional BC entropy of the other domain given `given`.
    pub limit: f64,
}

fn round_counts(total: u64, law: &[f64]) -> Vec<u64> {
    law.iter().map(|&p| (p * total as f64).round() as u64).collect()
}

/// Conditional entropy `H(B | A)` of a joint table `t[a][b]`, row by row.
fn conditional_entropy(t: &[Vec<f64>]) -> f64 {
    t.iter()
        .map(|row| {
            let pa: f64 = row.iter().sum();
            if pa == 0.0 {
                0.0
            } else {
                pa * entropy_unchecked(&row.iter().map(|&p| p / pa).collect::<Vec<_>>())
            }
        })
        .sum()
}

fn orient<T: Clone>(rows: Vec<Vec<T>>, given: Side, zero: T) -> Vec<Vec<T>> {
    match given {
        Side::First => rows,
        Side::Second => {
            let (r, c) = (rows.len(), rows.first().map_or(0, Vec::len));
            (0..c).map(|j| (0..r).map(|i| rows[i].get(j).cloned().unwrap_or(zero.clone())).collect()).collect()
        }
    }
}

/// Finite-n evaluation of the four-term upper bound on `ln |S(G_given)|` for
/// the configuration model, with the asymptotic graph-count formula for the
/// second term, together with its limit form.
pub fn cond_bound_cm(model: &CmModel, n: u64, given: Side) -> Result<CondBoundCm> {
    if n < 2 {
        return invalid("n must be at least 2");
    }
    let marks = model.marks();
    let beta = model.beta(given);
    let r = model.r();
    let d12 = model.mean_degree();
    let gap = d12 * (1.0 - beta);
    if gap <= 0.0 {
        return invalid("the joint limit degree must exceed the conditioning marginal degree");
    }
    // pair law of (Xᵢ, X − Xᵢ)
    let law = thinning_law(r, beta);
    let delta = r.len() - 1;
    let mut pair = vec![vec![0.0; delta + 1]; delta + 1];
    for (k, row) in law.iter().enumerate() {
        for (l, &p) in row.iter().enumerate() {
            pair[l][k - l] += p;
        }
    }
    let rest: Vec<f64> = (0..=delta).map(|j| pair.iter().map(|row| row[j]).sum()).collect();
    let e_log_rest: f64 = rest.iter().enumerate().map(|(j, &p)| p * ln_factorial(j as u64)).sum();

    let gamma_rows: Vec<Vec<f64>> = {
        let n1 = marks.edge_alphabet(Side::First).len();
        let n2 = marks.edge_alphabet(Side::Second).len();
        let mut rows = vec![vec![0.0; n2 + 1]; n1 + 1];
        for (i, &g) in model.gamma().iter().enumerate() {
            let x = marks.joint_edge_mark(i).expect("joint index");
            rows[x.first().map_or(n1, usize::from)][x.second().map_or(n2, usize::from)] += g;
        }
        orient(rows, given, 0.0)
    };
    let q_rows: Vec<Vec<f64>> = {
        let t1 = marks.vertex_alphabet(Side::First).len();
        let t2 = marks.vertex_alphabet(Side::Second).len();
        let mut rows = vec![vec![0.0; t2]; t1];
        for (i, &q) in model.q().iter().enumerate() {
            let t = marks.joint_vertex_mark(i).expect("joint index");
            rows[usize::from(t.first)][usize::from(t.second)] += q;
        }
        orient(rows, given, 0.0)
    };
    let limit = -s_unchecked(gap) + conditional_entropy(&pair) - e_log_rest
        + d12 / 2.0 * conditional_entropy(&gamma_rows)
        + conditional_entropy(&q_rows);

    let nf = n as f64;
    let slack = nf.powf(2.0 / 3.0);
    let matrix_count = ((delta + 1) * (delta + 1)) as f64 * (2.0 * slack + 1.0).ln();
    // term 1: split each given-degree class by the added degree, at the centred pair counts
    let mut t1 = matrix_count;
    let mut added: Vec<u64> = vec![0; delta + 1];
    for row in &pair {
        let counts = round_counts(n, row);
        for (j, &c) in counts.iter().enumerate() {
            added[j] += c;
        }
        t1 += log_multinomial(counts.iter().sum(), &counts)?;
    }
    // term 2: asymptotic count of graphs with the added degree sequence
    let vertices: u64 = added.iter().sum();
    let stubs: u64 = added.iter().enumerate().map(|(j, &c)| j as u64 * c).sum();
    let mean_log_fact: f64 =
        added.iter().enumerate().map(|(j, &c)| c as f64 * ln_factorial(j as u64)).sum::<f64>() / vertices.max(1) as f64;
    let t2 = stubs as f64 / 2.0 * nf.ln() + nf * (-s_unchecked(stubs as f64 / nf) - mean_log_fact);
    // term 3: marks of the other domain on all m_n edges, split by the given-domain mark
    let m_n = (nf * d12 / 2.0).round() as u64;
    let mut t3 = 0.0;
    for row in &gamma_rows {
        let counts = round_counts(m_n, row);
        t3 += log_multinomial(counts.iter().sum(), &counts)?;
    }
    // term 4: vertex marks of the other domain
    let mut t4 = 0.0;
    for row in &q_rows {
        let counts = round_counts(n, row);
        t4 += log_multinomial(counts.iter().sum(), &counts)?;
    }
    let terms = [t1, t2, t3, t4];
    let bound: f64 = terms.iter().sum();
    Ok(CondBoundCm { n, terms, bound, normalized: (bound - nf * gap / 2.0 * nf.ln()) / nf, limit })
}
