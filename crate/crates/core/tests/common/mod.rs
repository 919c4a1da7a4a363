#![allow(dead_code)]

use graphsw_core::marked_graph::{EdgePair, JointGraph, MarkSpaces, MarkedGraph, VertexPair};
use proptest::prelude::*;

pub fn spaces(k1: usize, k2: usize, t1: usize, t2: usize) -> MarkSpaces {
    let names = |p: &str, k: usize| (0..k).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    let (a, b, c, d) = (names("x", k1), names("y", k2), names("t", t1), names("s", t2));
    fn r(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    MarkSpaces::from_symbols(&r(&a), &r(&b), &r(&c), &r(&d)).unwrap()
}

pub fn edge(marks: &MarkSpaces, x1: Option<u16>, x2: Option<u16>) -> usize {
    marks.joint_edge_index(EdgePair::new(x1, x2).unwrap())
}

/// Alphabets plus a joint graph over them. Each pair is an edge with probability `density`.
pub fn joint_graph(max_n: usize, density: f64) -> impl Strategy<Value = (MarkSpaces, JointGraph)> {
    (1usize..=2, 1usize..=2, 1usize..=2, 1usize..=2, 1..=max_n).prop_flat_map(move |(k1, k2, t1, t2, n)| {
        let marks = spaces(k1, k2, t1, t2);
        let xs = marks.joint_edge_marks();
        let ts = marks.joint_vertex_marks();
        let pairs = n * (n - 1) / 2;
        (
            Just(marks),
            proptest::collection::vec(0..ts.len(), n),
            proptest::collection::vec((proptest::bool::weighted(density), 0..xs.len()), pairs),
        )
            .prop_map(move |(marks, vm, em)| {
                let vertex_marks: Vec<VertexPair> = vm.iter().map(|&i| ts[i]).collect();
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if em[k].0 {
                            edges.push((u, v, xs[em[k].1]));
                        }
                        k += 1;
                    }
                }
                let j = MarkedGraph::from_edges(vertex_marks, edges).unwrap();
                (marks, j)
            })
    })
}
