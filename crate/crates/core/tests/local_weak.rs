mod common;

use std::collections::{BTreeMap, VecDeque};

use common::{edge, spaces};
use graphsw_core::ensembles::{sample_cm, sample_er, CmModel, ErModel, Model};
use graphsw_core::local_weak::{
    canonicalize, dist_tv, empirical_u, empirical_u_domain, er_limit_law, er_marginal_limit_law, limit_degree,
    marginal_class, sample_gw_cm, sample_gw_law, ClassKind, NeighborhoodDist, RootedClass, RootedGraph,
};
use graphsw_core::marked_graph::{marginal, Side};
use graphsw_core::rng::SeedStream;
use proptest::prelude::*;

/// Induced subgraph on the vertices within `depth` of vertex 0, relabeled in BFS order.
fn ball(g: &RootedGraph) -> (Vec<u32>, BTreeMap<(usize, usize), u32>) {
    let n = g.vertex_marks.len();
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut dist = vec![u32::MAX; n];
    let mut order = vec![0];
    dist[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == u32::MAX && dist[u] < g.depth {
                dist[v] = dist[u] + 1;
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let marks = order.iter().map(|&v| g.vertex_marks[v]).collect();
    let edges = g
        .edges
        .iter()
        .filter(|(u, v, _)| pos[*u] != usize::MAX && pos[*v] != usize::MAX)
        .map(|&(u, v, x)| ((pos[u].min(pos[v]), pos[u].max(pos[v])), x))
        .collect();
    (marks, edges)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Rooted isomorphism of the two balls by trying every root-fixing bijection.
fn brute_isomorphic(a: &RootedGraph, b: &RootedGraph) -> bool {
    let (ma, ea) = ball(a);
    let (mb, eb) = ball(b);
    if ma.len() != mb.len() || ea.len() != eb.len() || a.kind != b.kind || a.depth != b.depth {
        return false;
    }
    permutations(ma.len() - 1).into_iter().any(|p| {
        let f = |v: usize| if v == 0 { 0 } else { p[v - 1] + 1 };
        (0..ma.len()).all(|v| ma[v] == mb[f(v)])
            && ea.iter().all(|(&(u, v), &x)| eb.get(&(f(u).min(f(v)), f(u).max(f(v)))) == Some(&x))
    })
}

fn rooted_graph() -> impl Strategy<Value = RootedGraph> {
    (2usize..=6, 1u32..=3).prop_flat_map(|(n, depth)| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            Just(depth),
            proptest::collection::vec(0u32..2, n),
            proptest::collection::vec(proptest::option::weighted(0.45, 0u32..2), pairs),
        )
            .prop_map(|(n, depth, vertex_marks, slots)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if let Some(x) = slots[k] {
                            edges.push((u, v, x));
                        }
                        k += 1;
                    }
                }
                RootedGraph { kind: ClassKind::Joint, depth, vertex_marks, edges }
            })
    })
}

/// Relabels the non-root vertices by `perm` and optionally flips one mark.
fn variant(g: &RootedGraph, perm: &[usize], flip: Option<usize>) -> RootedGraph {
    let f = |v: usize| if v == 0 { 0 } else { perm[v - 1] + 1 };
    let mut vertex_marks = vec![0; g.vertex_marks.len()];
    for (v, &t) in g.vertex_marks.iter().enumerate() {
        vertex_marks[f(v)] = t;
    }
    let mut edges: Vec<_> = g.edges.iter().map(|&(u, v, x)| (f(u), f(v), x)).collect();
    match flip {
        Some(i) if i < edges.len() => edges[i].2 ^= 1,
        Some(i) => {
            let v = i % vertex_marks.len();
            vertex_marks[v] ^= 1;
        }
        None => {}
    }
    RootedGraph { kind: g.kind, depth: g.depth, vertex_marks, edges }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn canonical_codes_decide_rooted_isomorphism(
        g in rooted_graph(),
        seed in any::<u64>(),
        flip in proptest::option::of(0usize..20),
    ) {
        let k = g.vertex_marks.len() - 1;
        let all = permutations(k);
        let perm = &all[(seed % all.len() as u64) as usize];
        let h = variant(&g, perm, flip);
        let (cg, ch) = (canonicalize(&g).unwrap(), canonicalize(&h).unwrap());
        prop_assert_eq!(cg == ch, brute_isomorphic(&g, &h));
        prop_assert!(brute_isomorphic(&g, &cg.decode()));
        prop_assert_eq!(RootedClass::from_base64(&cg.to_base64()).unwrap(), cg);
    }
}

fn er_model() -> ErModel {
    let marks = spaces(1, 1, 2, 1);
    let mut p = vec![0.0; 3];
    p[edge(&marks, Some(0), Some(0))] = 0.8;
    p[edge(&marks, Some(0), None)] = 0.5;
    p[edge(&marks, None, Some(0))] = 0.3;
    ErModel::new(marks, p, vec![0.4, 0.6]).unwrap()
}

fn cm_model() -> CmModel {
    let marks = spaces(1, 1, 1, 2);
    CmModel::new(marks, vec![0.1, 0.2, 0.3, 0.4], vec![0.5, 0.3, 0.2], vec![0.5, 0.5], 2.0).unwrap()
}

#[test]
fn depth_zero_frequencies_follow_q() {
    let model = Model::Er(er_model());
    let samples = 20_000;
    let law = sample_gw_law(&model, 0, samples, &SeedStream::new(1)).unwrap();
    for (t, q) in [(0u32, 0.4), (1, 0.6)] {
        let c = canonicalize(&RootedGraph { kind: ClassKind::Joint, depth: 0, vertex_marks: vec![t], edges: vec![] })
            .unwrap();
        let sigma = (q * (1.0 - q) / samples as f64).sqrt();
        assert!((law.prob(&c) - q).abs() <= 3.0 * sigma, "mark {t}: {} vs {q}", law.prob(&c));
    }
}

#[test]
fn cm_root_degree_follows_r() {
    let model = cm_model();
    let samples = 20_000u64;
    let root = SeedStream::new(2);
    let mut counts = [0u64; 4];
    for t in 0..samples {
        counts[sample_gw_cm(&model, 1, &root.split_index(t)).root_degree()] += 1;
    }
    for (k, &r) in model.r().iter().enumerate() {
        let sigma = (r * (1.0 - r) / samples as f64).sqrt();
        assert!((counts[k] as f64 / samples as f64 - r).abs() <= 3.0 * sigma, "degree {k}: {counts:?}");
    }
}

#[test]
fn sampled_joint_law_marginalizes_to_the_marginal_limit() {
    let model = er_model();
    let joint = sample_gw_law(&Model::Er(model.clone()), 1, 100_000, &SeedStream::new(3)).unwrap();
    for side in [Side::First, Side::Second] {
        let pushed = joint.map_classes(|c| marginal_class(c, side, model.marks())).unwrap();
        let exact = er_marginal_limit_law(&model, side, 1).unwrap();
        let tv = dist_tv(&pushed, &exact).unwrap();
        assert!(tv <= 0.02, "{side:?}: {tv}");
    }
}

#[test]
fn exact_depth_one_law_matches_gw_samples() {
    let marks = spaces(1, 1, 1, 1);
    let mut p = vec![0.0; 3];
    p[edge(&marks, Some(0), Some(0))] = 0.8;
    p[edge(&marks, Some(0), None)] = 0.5;
    p[edge(&marks, None, Some(0))] = 0.3;
    let model = ErModel::new(marks, p, vec![1.0]).unwrap();
    let exact = er_limit_law(&model, 1).unwrap();
    let sampled = sample_gw_law(&Model::Er(model), 1, 100_000, &SeedStream::new(4)).unwrap();
    let tv = dist_tv(&exact, &sampled).unwrap();
    assert!(tv <= 0.02, "{tv} over {} classes", exact.len());
}

#[test]
fn limit_degrees_match_sampled_graphs() {
    let er = er_model();
    let g = sample_er(&er, 20_000, &SeedStream::new(5)).unwrap();
    let d = limit_degree(&Model::Er(er.clone()));
    let mean = |deg: Vec<usize>| deg.iter().sum::<usize>() as f64 / deg.len() as f64;
    assert!((mean(g.degree_sequence()) - d.d12).abs() < 0.05);
    for side in [Side::First, Side::Second] {
        assert!((mean(marginal(&g, side).graph().degree_sequence()) - d.get(side)).abs() < 0.05);
    }
    assert!(d.d12 <= d.d1 + d.d2 + 1e-12);

    let cm = cm_model();
    let g = sample_cm(&cm, 20_000, &SeedStream::new(6)).unwrap();
    let d = limit_degree(&Model::Cm(cm));
    for side in [Side::First, Side::Second] {
        assert!((mean(marginal(&g, side).graph().degree_sequence()) - d.get(side)).abs() < 0.05);
    }
    assert!(d.d12 <= d.d1 + d.d2 + 1e-12);
}

#[test]
fn empirical_laws_round_trip_through_json() {
    let er = er_model();
    let g = sample_er(&er, 2_000, &SeedStream::new(7)).unwrap();
    for h in 0..=2 {
        let u = empirical_u(&g, er.marks(), h).unwrap();
        let total: f64 = u.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-9);
        let back: NeighborhoodDist = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        assert_eq!(back, u);
    }
    let u1 = empirical_u_domain(&marginal(&g, Side::First), 1).unwrap();
    let pushed = empirical_u(&g, er.marks(), 1).unwrap().map_classes(|c| marginal_class(c, Side::First, er.marks()));
    // taking balls commutes with marginalization
    assert!(dist_tv(&u1, &pushed.unwrap()).unwrap() < 1e-12);
}
