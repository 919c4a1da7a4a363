use std::collections::HashSet;

use graphsw_core::codec::{
    decode_exhaustive, encode, encode_with, simulate, Bin, BinSpace, Binner, CodeParams, DecodeOutcome, Outcome,
    Simulator, TypicalIndex, TypicalSpec,
};
use graphsw_core::ensembles::{sample_er, CmModel, ErModel, Model};
use graphsw_core::entropy::RateTuple;
use graphsw_core::marked_graph::{superpose, marginal, EdgePair, MarkSpaces, MarkedGraph, Side, VertexPair, DomainGraph};
use graphsw_core::rng::SeedStream;

fn marks() -> MarkSpaces {
    MarkSpaces::from_symbols(&["a"], &["b"], &["t"], &["s"]).unwrap()
}

fn er_model() -> ErModel {
    let m = marks();
    let mut p = vec![0.0; 3];
    p[m.joint_edge_index(EdgePair::new(Some(0), Some(0)).unwrap())] = 1.0;
    p[m.joint_edge_index(EdgePair::new(Some(0), None).unwrap())] = 0.5;
    p[m.joint_edge_index(EdgePair::new(None, Some(0)).unwrap())] = 0.5;
    ErModel::new(m, p, vec![1.0]).unwrap()
}

fn params(n: usize, r: f64, seed: u64) -> CodeParams {
    CodeParams::new(n, RateTuple::new(0.0, r, 0.0, r), seed).unwrap()
}

#[test]
fn bin_spaces() {
    let p = CodeParams::new(16, RateTuple::new(0.0, std::f64::consts::LN_2, 0.0, 100.0), 0).unwrap();
    assert_eq!(p.bin_space(Side::First), BinSpace::Materialized { size: 1 << 16 });
    assert!(matches!(p.bin_space(Side::Second), BinSpace::Lazy { .. }));
    assert!(CodeParams::new(5, RateTuple::new(0.0, -1.0, 0.0, 0.0), 0).is_err());
}

#[test]
fn encoding_is_deterministic_and_marginal_only() {
    let model = er_model();
    let p = params(30, 0.3, 9);
    let g = sample_er(&model, 30, &SeedStream::new(1)).unwrap();
    assert_eq!(encode(&g, &p), encode(&g, &p));
    // same first marginal, different second marginal
    let g1 = marginal(&g, Side::First);
    let mut h2 = marginal(&g, Side::Second).graph().clone();
    let (u, v) = (0..30).flat_map(|u| (u + 1..30).map(move |v| (u, v))).find(|&(u, v)| h2.edge(u, v).is_none()).unwrap();
    h2.insert_edge(u, v, 0).unwrap();
    let h = superpose(&g1, &DomainGraph::new(Side::Second, h2, model.marks()).unwrap()).unwrap();
    let (a, b) = (encode(&g, &p), encode(&h, &p));
    assert_eq!(a.0, b.0);
    assert_ne!(marginal(&g, Side::Second), marginal(&h, Side::Second));
}

#[test]
fn materialized_collision_rate_matches_one_over_l() {
    let p = CodeParams::new(16, RateTuple::new(0.0, std::f64::consts::LN_2, 0.0, 0.0), 3).unwrap();
    let b = Binner::new(&p);
    let pairs = 100_000u64;
    let hits = (0..pairs)
        .filter(|i| b.bin(Side::First, &(2 * i).to_le_bytes()) == b.bin(Side::First, &(2 * i + 1).to_le_bytes()))
        .count() as f64;
    let q = 1.0 / 65536.0;
    let sd = (pairs as f64 * q * (1.0 - q)).sqrt();
    assert!((hits - pairs as f64 * q).abs() <= 3.0 * sd + 1.0, "hits = {hits}");
}

#[test]
fn lazy_collisions_are_symmetric_and_reflexive() {
    let p = CodeParams::new(50, RateTuple::new(0.0, 1.0, 0.0, 1.0), 4).unwrap();
    let b = Binner::new(&p);
    let x = b.bin(Side::Second, b"x");
    assert!(matches!(x, Bin::Lazy(_)));
    assert!(b.matches(Side::Second, &x, b"x"));
    let y = b.bin(Side::Second, b"y");
    assert_eq!(b.matches(Side::Second, &x, b"y"), b.matches(Side::Second, &y, b"x"));
}

#[test]
fn zero_rate_fails_almost_surely() {
    let model = Model::Er(er_model());
    let (s, _) = simulate(params(5, 0.0, 1), &model, 100, 2).unwrap();
    assert!(s.pe.rate > 0.95, "pe = {}", s.pe.rate);
}

#[test]
fn singleton_typical_set_never_errs() {
    let m = marks();
    let mut gamma = vec![0.0; 3];
    gamma[m.joint_edge_index(EdgePair::new(Some(0), Some(0)).unwrap())] = 1.0;
    let cm = Model::Cm(CmModel::new_joint_only(m, vec![0.0, 0.0, 1.0], gamma, vec![1.0], 4.0).unwrap());
    for r in [0.0, 1.0] {
        let (s, _) = simulate(params(3, r, 5), &cm, 50, 6).unwrap();
        assert_eq!((s.pe.count, s.typical_set_size), (0, 1));
    }
}

#[test]
fn injective_bins_never_ambiguous() {
    let model = Model::Er(er_model());
    let spec = TypicalSpec::for_model(&model, 5).unwrap();
    let index = TypicalIndex::build(&spec).unwrap();
    // ln L = 5 R with R = 8 gives L ≈ 2.4e17, far above the typical-set size
    let sim = Simulator::with_index(params(5, 8.0, 11), &model, index.clone(), 12).unwrap();
    for t in 0..100 {
        let binner = sim.binner(t);
        let b1: Vec<Bin> = index.candidates(Side::First).iter().map(|c| binner.bin(Side::First, &c.bytes)).collect();
        let b2: Vec<Bin> = index.candidates(Side::Second).iter().map(|c| binner.bin(Side::Second, &c.bytes)).collect();
        let mut seen = HashSet::new();
        assert!(index.pairs().all(|(a, b)| seen.insert((b1[a as usize].clone(), b2[b as usize].clone()))));
        let src = sim.sample_source(t).unwrap();
        let rec = sim.trial(t).unwrap();
        assert_ne!(rec.outcome, Outcome::Ambiguous);
        assert_eq!(rec.decoded, rec.typical);
        if rec.typical {
            let bins = encode_with(&src, &binner);
            assert_eq!(decode_exhaustive(&bins, &binner, &index), DecodeOutcome::Unique(src));
        }
    }
    let empty = MarkedGraph::empty(vec![VertexPair::new(0, 0); 5]);
    let bins = encode_with(&empty, &sim.binner(0));
    assert_eq!(decode_exhaustive(&bins, &sim.binner(0), &index), DecodeOutcome::NotFound);
}
