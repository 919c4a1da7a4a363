use serde::{Deserialize, Serialize};

use crate::entropy::log_multinomial;
use crate::error::{invalid, Error, Result};
use crate::local_weak::{dist_tv, ClassKind, CodedGraph, NeighborhoodDist};
use crate::marked_graph::MarkSpaces;

pub const MAX_MARKED_ENUMERATION_N: usize = 8;
/// Cap on the number of graphs visited.
pub const MAX_MARKED_ENUMERATION: f64 = 5e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCount {
    /// Graphs with the given counts whose neighborhood law is within `eps` of the target.
    pub count: u64,
    /// All graphs with the given counts.
    pub total: u64,
    /// `ln count`, `-inf` when empty.
    pub log_count: f64,
}

/// Visits every placement of `parts[i]` items of kind `i` into `slots` slots, leaving the rest empty.
fn placements(slots: usize, parts: &[u64], visit: &mut dyn FnMut(&[Option<u32>])) {
    fn go(i: usize, left: &mut [u64], cur: &mut Vec<Option<u32>>, visit: &mut dyn FnMut(&[Option<u32>])) {
        let slots = cur.capacity();
        if i == slots {
            visit(cur);
            return;
        }
        let need: u64 = left.iter().sum();
        if (need as usize) < slots - i {
            cur.push(None);
            go(i + 1, left, cur, visit);
            cur.pop();
        }
        for k in 0..left.len() {
            if left[k] > 0 {
                left[k] -= 1;
                cur.push(Some(k as u32));
                go(i + 1, left, cur, visit);
                cur.pop();
                left[k] += 1;
            }
        }
    }
    let mut left = parts.to_vec();
    let mut cur = Vec::with_capacity(slots);
    go(0, &mut left, &mut cur, visit);
}

/// Exhaustive count of jointly marked graphs on `n` vertices with joint edge
/// counts `m` and joint vertex counts `u` whose empirical depth-`h` law lies
/// within total variation `eps` of `target` (depth `h` is the target's depth).
pub fn bc_definition_oracle(
    target: &NeighborhoodDist,
    marks: &MarkSpaces,
    eps: f64,
    n: usize,
    m: &[u64],
    u: &[u64],
) -> Result<BallCount> {
    if n == 0 || n > MAX_MARKED_ENUMERATION_N {
        return Err(Error::Resource(format!("marked enumeration supports 1 <= n <= {MAX_MARKED_ENUMERATION_N}")));
    }
    if m.len() != marks.joint_edge_count() || u.len() != marks.joint_vertex_count() {
        return invalid("count vectors must be indexed by the joint alphabets");
    }
    if u.iter().sum::<u64>() != n as u64 {
        return invalid("vertex counts must sum to n");
    }
    if target.iter().any(|(c, _)| c.kind() != ClassKind::Joint) {
        return invalid("target law must be on jointly marked classes");
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    if m.iter().sum::<u64>() as usize > pairs.len() {
        return invalid("more edges than vertex pairs");
    }
    let log_total = log_multinomial(n as u64, u)? + log_multinomial(pairs.len() as u64, m)?;
    if log_total > MAX_MARKED_ENUMERATION.ln() {
        return Err(Error::Resource(format!("{:.3e} graphs exceed the enumeration cap", log_total.exp())));
    }
    let h = target.depth();
    let mut edge_layouts: Vec<Vec<(usize, usize, u32)>> = Vec::new();
    placements(pairs.len(), m, &mut |slots| {
        edge_layouts.push(slots.iter().zip(&pairs).filter_map(|(x, &(a, b))| x.map(|x| (a, b, x))).collect());
    });
    let (mut count, mut total) = (0u64, 0u64);
    let mut failure = None;
    placements(n, u, &mut |vm| {
        if failure.is_some() {
            return;
        }
        let vertex_marks: Vec<u32> = vm.iter().map(|t| t.expect("every vertex is marked")).collect();
        for edges in &edge_layouts {
            total += 1;
            let g = CodedGraph::from_codes(ClassKind::Joint, vertex_marks.clone(), edges);
            match g.empirical_u(h).and_then(|d| dist_tv(&d, target)) {
                Ok(tv) if tv <= eps => count += 1,
                Ok(_) => {}
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(BallCount { count, total, log_count: if count == 0 { f64::NEG_INFINITY } else { (count as f64).ln() } })
}
