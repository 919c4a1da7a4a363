use rand::Rng;
use serde::{Deserialize, Serialize};

use super::asymptotics::{cm_count_asymptote, cm_count_finite, multinomial_asymptotics, thinning_identity, MultinomialCase};
use super::bc_oracle::bc_definition_oracle;
use super::bounds::cond_bound_cm;
use super::counting::enumerate_with_degrees;
use crate::codec::{simulate, CodeParams, Outcome};
use crate::ensembles::{sample_er, CmModel, ErModel, Model};
use crate::entropy::{bc_entropy_cm, bc_entropy_er, exact_shannon_er, log_multinomial, rate_region_contains, RateTuple};
use crate::error::{invalid, Result};
use crate::local_weak::{
    canonicalize, dist_tv, empirical_u, er_limit_law, er_marginal_limit_law, marginal_class, ClassKind, CodedGraph,
    Provenance, NeighborhoodDist, RootedGraph,
};
use crate::marked_graph::{EdgePair, MarkSpaces, Side};
use crate::rng::SeedStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Counting,
    Entropy,
    LocalWeak,
    Codec,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "counting" => Suite::Counting,
            "entropy" => Suite::Entropy,
            "local-weak" => Suite::LocalWeak,
            "codec" => Suite::Codec,
            _ => return invalid(format!("unknown suite `{s}` (all, counting, entropy, local-weak, codec)")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

type Check = (&'static str, fn(&SeedStream) -> Result<(bool, String)>);

const COUNTING: &[Check] = &[
    ("degree-sequence-counts", degree_counts),
    ("degree-count-permutation-invariance", permutation_invariance),
    ("two-regular-trend", two_regular_trend),
    ("multinomial-linear", multinomial_linear),
    ("multinomial-quadratic", multinomial_quadratic),
    ("bc-oracle-full-ball", bc_full_ball),
];
const ENTROPY: &[Check] = &[
    ("thinning-identity", thinning_random),
    ("cm-count-asymptote", cm_asymptote_examples),
    ("cond-bound-cm-limit", cond_bound_paths),
    ("er-shannon-coefficient", shannon_coefficient),
    ("rate-region-corners", region_corners),
];
const LOCAL_WEAK: &[Check] = &[
    ("er-depth1-tv", er_depth1_tv),
    ("marginal-limit-consistency", marginal_consistency),
    ("relabeling-invariance", relabeling_invariance),
];
const CODEC: &[Check] = &[("injective-bins-decode", injective_decode), ("zero-rate-fails", zero_rate)];

/// Runs the oracle checks of `suite`. A check that errors counts as failed.
pub fn run_suite(suite: Suite, seed: u64) -> VerifyReport {
    let groups: Vec<&[Check]> = match suite {
        Suite::All => vec![COUNTING, ENTROPY, LOCAL_WEAK, CODEC],
        Suite::Counting => vec![COUNTING],
        Suite::Entropy => vec![ENTROPY],
        Suite::LocalWeak => vec![LOCAL_WEAK],
        Suite::Codec => vec![CODEC],
    };
    let root = SeedStream::new(seed);
    let checks: Vec<CheckResult> = groups
        .into_iter()
        .flatten()
        .map(|&(name, f)| {
            let (passed, detail) = f(&root.split(name)).unwrap_or_else(|e| (false, e.to_string()));
            CheckResult { name: name.to_string(), passed, detail }
        })
        .collect();
    VerifyReport { suite, passed: checks.iter().all(|c| c.passed), checks }
}

fn singleton_marks() -> MarkSpaces {
    MarkSpaces::from_symbols(&["a"], &["b"], &["t"], &["s"]).expect("valid alphabets")
}

fn single_mark_er(p: f64) -> Result<ErModel> {
    let marks = singleton_marks();
    let mut v = vec![0.0; 3];
    v[marks.joint_edge_index(EdgePair::new(Some(0), Some(0)).expect("non-empty pair"))] = p;
    ErModel::new_joint_only(marks, v, vec![1.0])
}

fn random_law(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn random_cm(rng: &mut impl Rng, max_deg: usize) -> Result<CmModel> {
    let marks = MarkSpaces::from_symbols(&["a", "b"], &["c"], &["t"], &["s", "u"])?;
    let r = random_law(rng, max_deg + 1);
    let gamma = random_law(rng, marks.joint_edge_count());
    let q = random_law(rng, marks.joint_vertex_count());
    CmModel::new(marks, r, gamma, q, 3.0)
}

fn degree_counts(_: &SeedStream) -> Result<(bool, String)> {
    let got = [
        enumerate_with_degrees(&[1, 1, 1, 1])?,
        enumerate_with_degrees(&[2, 2, 2])?,
        enumerate_with_degrees(&[1; 6])?,
        enumerate_with_degrees(&[0; 5])?,
    ];
    Ok((got == [3, 1, 15, 1], format!("{got:?}")))
}

fn permutation_invariance(_: &SeedStream) -> Result<(bool, String)> {
    let a = enumerate_with_degrees(&[3, 2, 2, 1, 1, 1])?;
    let b = enumerate_with_degrees(&[1, 2, 1, 3, 1, 2])?;
    Ok((a == b && a > 0, format!("{a} vs {b}")))
}

fn two_regular_trend(_: &SeedStream) -> Result<(bool, String)> {
    let v: Vec<f64> = [6, 8, 10].iter().map(|&n| cm_count_finite(&vec![2; n])).collect::<Result<_>>()?;
    let limit = cm_count_asymptote(&[0.0, 0.0, 1.0])?;
    let ok = v.windows(2).all(|w| w[0] < w[1]) && v[2] < limit && (v[2] - limit).abs() <= 0.35;
    Ok((ok, format!("{v:?} toward {limit}")))
}

fn multinomial_linear(_: &SeedStream) -> Result<(bool, String)> {
    let rep = multinomial_asymptotics(MultinomialCase::Linear, &[1.0, 0.5, 0.5], &[1000])?;
    let e = rep.errors()[0];
    Ok((e < 0.01, format!("error {e:.3e} at n = 1000")))
}

fn multinomial_quadratic(_: &SeedStream) -> Result<(bool, String)> {
    let rep = multinomial_asymptotics(MultinomialCase::Quadratic, &[0.5], &[100, 200, 400, 800])?;
    let e = rep.errors();
    Ok((e.windows(2).all(|w| w[1] < w[0]), format!("errors {e:.3?}")))
}

fn bc_full_ball(_: &SeedStream) -> Result<(bool, String)> {
    let marks = singleton_marks();
    let root = canonicalize(&RootedGraph { kind: ClassKind::Joint, depth: 1, vertex_marks: vec![0], edges: vec![] })?;
    let target = NeighborhoodDist::new(1, Provenance::Exact, [(root, 1.0)].into_iter().collect())?;
    let (m, u) = ([2, 1, 1], [5]);
    let got = bc_definition_oracle(&target, &marks, 1.0, 5, &m, &u)?;
    let expect = (log_multinomial(5, &u)? + log_multinomial(10, &m)?).exp().round() as u64;
    Ok((got.count == expect && got.total == expect, format!("{} of {}, expected {expect}", got.count, got.total)))
}

fn thinning_random(stream: &SeedStream) -> Result<(bool, String)> {
    let mut rng = stream.rng();
    let mut worst = 0f64;
    for _ in 0..100 {
        let delta = rng.random_range(1..=6);
        let r = random_law(&mut rng, delta + 1);
        worst = worst.max(thinning_identity(&r, rng.random::<f64>())?.diff);
    }
    Ok((worst < 1e-9, format!("max diff {worst:.3e}")))
}

fn cm_asymptote_examples(_: &SeedStream) -> Result<(bool, String)> {
    let a = cm_count_asymptote(&[0.0, 0.0, 1.0])?;
    let b = cm_count_asymptote(&[0.0, 1.0])?;
    Ok(((a + 1.0).abs() < 1e-12 && (b + 0.5).abs() < 1e-12, format!("delta2 {a}, delta1 {b}")))
}

fn cond_bound_paths(stream: &SeedStream) -> Result<(bool, String)> {
    let mut rng = stream.rng();
    let mut worst = 0f64;
    for _ in 0..20 {
        let max_deg = rng.random_range(1..=4);
        let model = random_cm(&mut rng, max_deg)?;
        let bc = bc_entropy_cm(&model)?;
        let a = cond_bound_cm(&model, 1000, Side::First)?.limit;
        let b = cond_bound_cm(&model, 1000, Side::Second)?.limit;
        worst = worst.max((a - bc.sigma2given1).abs()).max((b - bc.sigma1given2).abs());
    }
    Ok((worst < 1e-9, format!("max diff {worst:.3e}")))
}

fn shannon_coefficient(_: &SeedStream) -> Result<(bool, String)> {
    let n = 1_000_000usize;
    let nf = n as f64;
    let h = exact_shannon_er(&single_mark_er(1.0)?, n)?;
    let c = (h - 0.5 * nf * nf.ln()) / nf;
    Ok(((c - 0.5).abs() <= 1e-3, format!("coefficient {c}")))
}

fn region_corners(_: &SeedStream) -> Result<(bool, String)> {
    // disjoint edge sets, so the three constraints meet at one corner
    let marks = singleton_marks();
    let mut p = vec![0.0; 3];
    p[marks.joint_edge_index(EdgePair::new(Some(0), None).expect("non-empty pair"))] = 0.5;
    p[marks.joint_edge_index(EdgePair::new(None, Some(0)).expect("non-empty pair"))] = 0.7;
    let bc = bc_entropy_er(&ErModel::new_joint_only(marks, p, vec![1.0])?);
    let corner = RateTuple::new(bc.d1 / 2.0, bc.sigma1given2, bc.d2 / 2.0, bc.sigma2given1);
    let inside = rate_region_contains(&bc, &corner);
    let mut ok = inside.contained && inside.constraints.iter().all(|c| c.binding);
    let mut detail = format!("corner contained {}", inside.contained);
    for (i, fails) in [(1u8, vec![1u8, 3]), (2, vec![2, 3])] {
        let mut t = corner;
        if i == 1 {
            t.alpha1 -= 0.01;
        } else {
            t.alpha2 -= 0.01;
        }
        let v = rate_region_contains(&bc, &t);
        ok &= !v.contained && v.failing() == fails;
        detail += &format!(", alpha{i} lowered fails {:?}", v.failing());
    }
    Ok((ok, detail))
}

fn er_depth1_tv(stream: &SeedStream) -> Result<(bool, String)> {
    let model = single_mark_er(1.0)?;
    let limit = er_limit_law(&model, 1)?;
    let mut tv = 0.0;
    for t in 0..5 {
        let g = sample_er(&model, 10_000, &stream.split_index(t))?;
        tv += dist_tv(&empirical_u(&g, model.marks(), 1)?, &limit)? / 5.0;
    }
    Ok((tv <= 0.05, format!("mean TV {tv:.4}")))
}

fn marginal_consistency(_: &SeedStream) -> Result<(bool, String)> {
    let marks = singleton_marks();
    let p = vec![0.6, 0.3, 0.4];
    let model = ErModel::new(marks.clone(), p, vec![1.0])?;
    let joint = er_limit_law(&model, 1)?;
    let mut worst = 0f64;
    for side in [Side::First, Side::Second] {
        let pushed = joint.map_classes(|c| marginal_class(c, side, &marks))?;
        worst = worst.max(dist_tv(&pushed, &er_marginal_limit_law(&model, side, 1)?)?);
    }
    Ok((worst < 1e-9, format!("max TV {worst:.3e}")))
}

fn relabeling_invariance(stream: &SeedStream) -> Result<(bool, String)> {
    let mut rng = stream.rng();
    let n = 60;
    let marks: Vec<u32> = (0..n).map(|_| rng.random_range(0..2)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < 2.5 / n as f64 {
                edges.push((u, v, rng.random_range(0..3)));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut pmarks = vec![0; n];
    for v in 0..n {
        pmarks[perm[v]] = marks[v];
    }
    let pedges: Vec<_> = edges.iter().map(|&(u, v, x)| (perm[u], perm[v], x)).collect();
    let a = CodedGraph::from_codes(ClassKind::Joint, marks, &edges);
    let b = CodedGraph::from_codes(ClassKind::Joint, pmarks, &pedges);
    let mut mismatches = 0;
    for v in 0..n {
        if a.neighborhood(v, 2)? != b.neighborhood(perm[v], 2)? {
            mismatches += 1;
        }
    }
    Ok((mismatches == 0, format!("{mismatches} of {n} depth-2 classes changed")))
}

fn codec_model() -> Result<Model> {
    let marks = singleton_marks();
    let mut p = vec![0.0; 3];
    p[marks.joint_edge_index(EdgePair::new(Some(0), Some(0)).expect("non-empty pair"))] = 1.0;
    p[marks.joint_edge_index(EdgePair::new(Some(0), None).expect("non-empty pair"))] = 0.5;
    p[marks.joint_edge_index(EdgePair::new(None, Some(0)).expect("non-empty pair"))] = 0.5;
    Ok(Model::Er(ErModel::new(marks, p, vec![1.0])?))
}

fn injective_decode(stream: &SeedStream) -> Result<(bool, String)> {
    let params = CodeParams::new(4, RateTuple::new(0.0, 12.0, 0.0, 12.0), stream.as_u64())?;
    let (summary, records) = simulate(params, &codec_model()?, 100, stream.split("source").as_u64())?;
    let bad = records.iter().filter(|r| r.typical && (r.outcome != Outcome::Unique || !r.decoded)).count();
    Ok((bad == 0, format!("{bad} typical sources not recovered, pe {:.3}", summary.pe.rate)))
}

fn zero_rate(stream: &SeedStream) -> Result<(bool, String)> {
    let params = CodeParams::new(4, RateTuple::new(0.0, 0.0, 0.0, 0.0), stream.as_u64())?;
    let (summary, _) = simulate(params, &codec_model()?, 100, stream.split("source").as_u64())?;
    Ok((summary.pe.rate > 0.9, format!("pe {:.3} with a typical set of {}", summary.pe.rate, summary.typical_set_size)))
}
