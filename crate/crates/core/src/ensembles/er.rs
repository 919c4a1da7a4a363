use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::Geometric;

use super::model::ErModel;
use crate::error::{invalid, Result};
use crate::marked_graph::{joint_counts, JointGraph, MarkedGraph};
use crate::rng::{SeedStream, StreamRng};

fn check_size(model: &ErModel, n: usize) -> Result<()> {
    let total = model.total_intensity();
    if (n as f64) <= total {
        return invalid(format!("n = {n} must exceed the total intensity {total}"));
    }
    Ok(())
}

pub(crate) fn sample_vertex_marks<T: Copy>(
    weights: &[f64],
    labels: &[T],
    n: usize,
    rng: &mut StreamRng,
) -> Vec<T> {
    let dist = WeightedIndex::new(weights).expect("validated distribution");
    (0..n).map(|_| labels[dist.sample(rng)]).collect()
}

/// Draws a graph from the marked Erdős–Rényi ensemble.
///
/// Present pairs are located by geometric skipping over the `C(n, 2)` pairs in
/// lexicographic order, so the cost is linear in the number of edges.
pub fn sample_er(model: &ErModel, n: usize, stream: &SeedStream) -> Result<JointGraph> {
    check_size(model, n)?;
    let marks = model.marks();
    let mut vrng = stream.split("vertex-marks").rng();
    let vm = sample_vertex_marks(model.q(), &marks.joint_vertex_marks(), n, &mut vrng);
    let mut g = MarkedGraph::empty(vm);

    let total = model.total_intensity();
    if total == 0.0 || n < 2 {
        return Ok(g);
    }
    let mut erng = stream.split("edges").rng();
    let mut mrng = stream.split("edge-marks").rng();
    let skip = Geometric::new(total / n as f64).expect("probability in (0, 1)");
    let edge_marks = marks.joint_edge_marks();
    let mark_dist = WeightedIndex::new(model.p()).expect("positive total");

    let pairs = (n * (n - 1) / 2) as u64;
    // `k` is the lexicographic index of the next candidate pair; `row_start` that of (u, u+1)
    let (mut k, mut u, mut row_start) = (0u64, 0usize, 0u64);
    loop {
        k = k.saturating_add(skip.sample(&mut erng));
        if k >= pairs {
            return Ok(g);
        }
        while k >= row_start + (n - 1 - u) as u64 {
            row_start += (n - 1 - u) as u64;
            u += 1;
        }
        let v = u + 1 + (k - row_start) as usize;
        let x = edge_marks[mark_dist.sample(&mut mrng)];
        g.insert_edge(u, v, x).expect("each pair visited once");
        k += 1;
    }
}

/// `ln P(j)` under the ER ensemble; `-inf` when a used mark has zero parameter.
pub fn log_prob_er(model: &ErModel, j: &JointGraph) -> Result<f64> {
    let n = j.n();
    check_size(model, n)?;
    j.validate(model.marks())?;
    let cv = joint_counts(j, model.marks());
    let nf = n as f64;
    let mut lp = 0.0;
    for (&m, &p) in cv.edge_counts.iter().zip(model.p()) {
        if m > 0 {
            if p == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            lp += m as f64 * (p / nf).ln();
        }
    }
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    let absent = pairs - cv.edge_total() as f64;
    if absent > 0.0 {
        lp += absent * (-model.total_intensity() / nf).ln_1p();
    }
    for (&u, &q) in cv.vertex_counts.iter().zip(model.q()) {
        if u > 0 {
            if q == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            lp += u as f64 * q.ln();
        }
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::model::{parse_model_config, Model};
    use crate::marked_graph::{EdgePair, MarkSpaces, VertexPair};

    fn single(p: f64) -> ErModel {
        let marks = MarkSpaces::from_symbols(&["a"], &["b"], &["t"], &["s"]).unwrap();
        let mut pv = vec![0.0; 3];
        pv[marks.joint_edge_index(EdgePair::new(Some(0), Some(0)).unwrap())] = p;
        ErModel::new_joint_only(marks, pv, vec![1.0]).unwrap()
    }

    #[test]
    fn rejects_small_n() {
        let m = single(4.0);
        assert!(sample_er(&m, 4, &SeedStream::new(1)).is_err());
        assert!(sample_er(&m, 5, &SeedStream::new(1)).is_ok());
    }

    #[test]
    fn deterministic_per_seed() {
        let m = single(1.0);
        let a = sample_er(&m, 300, &SeedStream::new(9)).unwrap();
        let b = sample_er(&m, 300, &SeedStream::new(9)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_er(&m, 300, &SeedStream::new(10)).unwrap());
    }

    #[test]
    fn two_vertex_single_edge_probability() {
        let m = single(1.0);
        let x = EdgePair::new(Some(0), Some(0)).unwrap();
        let j = MarkedGraph::from_edges(vec![VertexPair::new(0, 0); 2], [(0, 1, x)]).unwrap();
        let lp = log_prob_er(&m, &j).unwrap();
        assert!((lp - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn zero_parameter_mark_is_impossible() {
        let cfg = "model=er\nxi1=a\nxi2=b\ntheta1=t\ntheta2=s,r\np.a:_=1\np._:b=1\nq.t:s=1\n";
        let Model::Er(m) = parse_model_config(cfg).unwrap() else { unreachable!() };
        let x = EdgePair::new(Some(0), Some(0)).unwrap();
        let j = MarkedGraph::from_edges(vec![VertexPair::new(0, 0); 3], [(0, 1, x)]).unwrap();
        assert_eq!(log_prob_er(&m, &j).unwrap(), f64::NEG_INFINITY);
        let j = MarkedGraph::empty(vec![VertexPair::new(0, 1); 3]);
        assert_eq!(log_prob_er(&m, &j).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn every_pair_reachable() {
        // intensity close to n makes almost every pair present
        let m = single(5.9);
        let g = sample_er(&m, 6, &SeedStream::new(3)).unwrap();
        assert!(g.edge_count() >= 10);
    }
}
