mod common;

use std::collections::HashMap;

use common::{edge, spaces};
use graphsw_core::ensembles::ErModel;
use graphsw_core::local_weak::{canonicalize, empirical_u, ClassKind, RootedGraph};
use graphsw_core::marked_graph::packed::{for_each_domain_graph, PairIndex};
use graphsw_core::marked_graph::{joint_counts, superpose, DomainGraph, MarkedGraph, Side};
use graphsw_core::oracles::{
    bc_definition_oracle, cond_bound_a2_er, enumerate_with_degrees, run_suite, thinning_identity, typical_bound_a1,
    Suite,
};
use graphsw_core::Error;
use proptest::prelude::*;

fn model() -> ErModel {
    let marks = spaces(1, 1, 1, 2);
    let mut p = vec![0.0; 3];
    p[edge(&marks, Some(0), Some(0))] = 1.0;
    p[edge(&marks, Some(0), None)] = 0.5;
    p[edge(&marks, None, Some(0))] = 0.5;
    ErModel::new(marks, p, vec![0.5, 0.5]).unwrap()
}

#[test]
fn full_verify_suite_passes() {
    let report = run_suite(Suite::All, 2024);
    for c in &report.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    assert!(report.passed);
}

#[test]
fn thinning_half_of_two() {
    let c = thinning_identity(&[0.0, 0.0, 1.0], 0.5).unwrap();
    assert!((c.lhs - 1.5 * 2f64.ln()).abs() < 1e-12);
    assert!(c.diff < 1e-12);
    for eps in [0.0, 1.0] {
        assert_eq!(thinning_identity(&[0.2, 0.5, 0.3], eps).unwrap().diff, 0.0);
    }
}

#[test]
fn a1_counts_graphs_with_given_counts_exactly() {
    let m = model();
    let marks = m.marks();
    let n = 4;
    // every joint graph grouped by its count vectors
    let mut by_counts: HashMap<(Vec<u64>, Vec<u64>), u64> = HashMap::new();
    let idx = PairIndex::new(n).unwrap();
    for_each_domain_graph(&idx, 1, 1, |p1| {
        let g1 = p1.to_domain(Side::First, &idx);
        for_each_domain_graph(&idx, 1, 2, |p2| {
            let j = superpose(&g1, &p2.to_domain(Side::Second, &idx)).unwrap();
            let cv = joint_counts(&j, marks);
            *by_counts.entry((cv.edge_counts, cv.vertex_counts)).or_default() += 1;
        });
    });
    for ((mv, uv), count) in by_counts {
        let a1 = typical_bound_a1(&m, n as u64, &mv, &uv).unwrap();
        assert!((a1 - (count as f64).ln()).abs() < 1e-9, "{mv:?} {uv:?}: {count} vs {}", a1.exp());
    }
}

#[test]
fn a2_bounds_second_marginals_given_the_first() {
    let m = model();
    let marks = m.marks();
    let n = 5;
    let idx = PairIndex::new(n).unwrap();
    let g1 = DomainGraph::new(
        Side::First,
        MarkedGraph::from_edges(vec![0; n], [(0, 1, 0), (1, 2, 0), (3, 4, 0)]).unwrap(),
        marks,
    )
    .unwrap();
    let mut by_counts: HashMap<(Vec<u64>, Vec<u64>), u64> = HashMap::new();
    for_each_domain_graph(&idx, 1, 2, |p2| {
        let j = superpose(&g1, &p2.to_domain(Side::Second, &idx)).unwrap();
        let cv = joint_counts(&j, marks);
        *by_counts.entry((cv.edge_counts, cv.vertex_counts)).or_default() += 1;
    });
    assert!(by_counts.len() > 10);
    for ((mv, uv), count) in by_counts {
        let t = cond_bound_a2_er(&m, n as u64, &mv, &uv).unwrap();
        assert!((count as f64).ln() <= t.total() + 1e-9, "{mv:?} {uv:?}: {count} vs {}", t.total().exp());
        let sum = t.first_edges + t.new_edges + t.vertices;
        assert!((sum - t.total()).abs() < 1e-12);
    }
}

#[test]
fn marked_enumeration_is_capped() {
    let marks = spaces(1, 1, 1, 1);
    let root = canonicalize(&RootedGraph { kind: ClassKind::Joint, depth: 1, vertex_marks: vec![0], edges: vec![] })
        .unwrap();
    let target = graphsw_core::local_weak::NeighborhoodDist::new(
        1,
        graphsw_core::local_weak::Provenance::Exact,
        [(root, 1.0)].into_iter().collect(),
    )
    .unwrap();
    let r = bc_definition_oracle(&target, &marks, 0.5, 9, &[1, 0, 0], &[9]);
    assert!(matches!(r, Err(Error::Resource(_))));
    let r = bc_definition_oracle(&target, &marks, 0.5, 8, &[8, 6, 6], &[8]);
    assert!(matches!(r, Err(Error::Resource(_))));
    assert!(matches!(enumerate_with_degrees(&[1; 12]), Err(Error::Resource(_))));
}

#[test]
fn ball_around_an_empirical_law_contains_its_graph() {
    let marks = spaces(1, 1, 1, 1);
    let x = marks.joint_edge_marks()[0];
    let t = marks.joint_vertex_marks()[0];
    let g = MarkedGraph::from_edges(vec![t; 5], [(0, 1, x), (1, 2, x), (3, 4, x)]).unwrap();
    let target = empirical_u(&g, &marks, 1).unwrap();
    let r = bc_definition_oracle(&target, &marks, 0.0, 5, &[3, 0, 0], &[5]).unwrap();
    // a 3-path plus a disjoint edge: 5 centers times C(4,2) leaf pairs
    assert!(r.count >= 1 && r.count <= r.total);
    assert_eq!(r.count, 30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bc_counts_are_monotone_in_eps(m0 in 0u64..4, m1 in 0u64..2, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        let marks = spaces(1, 1, 1, 1);
        let t = marks.joint_vertex_marks()[0];
        let x = marks.joint_edge_marks()[0];
        let g = MarkedGraph::from_edges(vec![t; 5], [(0, 1, x), (2, 3, x)]).unwrap();
        let target = empirical_u(&g, &marks, 1).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let a = bc_definition_oracle(&target, &marks, lo, 5, &[m0, m1, 0], &[5]).unwrap();
        let b = bc_definition_oracle(&target, &marks, hi, 5, &[m0, m1, 0], &[5]).unwrap();
        prop_assert!(a.count <= b.count);
        prop_assert_eq!(a.total, b.total);
    }

    #[test]
    fn degree_counts_ignore_order(d in proptest::collection::vec(0usize..4, 1..8), seed in any::<u64>()) {
        let mut p = d.clone();
        let k = p.len();
        p.rotate_left((seed % k as u64) as usize);
        p.swap(0, k - 1);
        prop_assert_eq!(enumerate_with_degrees(&d).unwrap(), enumerate_with_degrees(&p).unwrap());
    }
}
