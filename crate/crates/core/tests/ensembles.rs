mod common;

use common::{edge, spaces};
use graphsw_core::ensembles::{
    build_degree_sequence, edge_marginal, format_model_config, log_prob_er, parse_model_config, sample_cm, sample_er, CmModel,
    ErModel, Model,
};
use graphsw_core::marked_graph::{joint_counts, Side};
use graphsw_core::rng::SeedStream;
use proptest::prelude::*;

fn single_mark() -> ErModel {
    let marks = spaces(1, 1, 1, 1);
    let mut p = vec![0.0; 3];
    p[edge(&marks, Some(0), Some(0))] = 1.0;
    ErModel::new_joint_only(marks, p, vec![1.0]).unwrap()
}

#[test]
fn er_mean_edge_count_within_three_sigma() {
    let model = single_mark();
    let n = 10_000usize;
    let root = SeedStream::new(3);
    let trials = 100;
    let mean: f64 = (0..trials).map(|t| sample_er(&model, n, &root.split_index(t)).unwrap().edge_count() as f64).sum::<f64>()
        / trials as f64;
    // Binomial(C(n,2), 1/n)
    let pairs = (n * (n - 1) / 2) as f64;
    let pr = 1.0 / n as f64;
    let sigma = (pairs * pr * (1.0 - pr) / trials as f64).sqrt();
    assert!((mean - pairs * pr).abs() <= 3.0 * sigma, "mean {mean} vs {}", pairs * pr);
}

#[test]
fn er_vertex_marks_follow_q() {
    let marks = spaces(1, 1, 2, 1);
    let mut p = vec![0.0; 3];
    p[edge(&marks, Some(0), Some(0))] = 1.0;
    p[edge(&marks, Some(0), None)] = 0.5;
    p[edge(&marks, None, Some(0))] = 0.5;
    let model = ErModel::new(marks.clone(), p, vec![0.3, 0.7]).unwrap();
    let g = sample_er(&model, 10_000, &SeedStream::new(4)).unwrap();
    let u = joint_counts(&g, &marks).vertex_counts;
    let sigma = (10_000.0f64 * 0.3 * 0.7).sqrt();
    assert!((u[0] as f64 - 3000.0).abs() <= 3.0 * sigma, "{u:?}");
}

#[test]
fn cm_samples_realize_the_degree_sequence() {
    let marks = spaces(1, 1, 1, 2);
    let model = CmModel::new(marks, vec![0.1, 0.3, 0.4, 0.2], vec![0.5, 0.25, 0.25], vec![0.5, 0.5], 2.0).unwrap();
    for n in [36, 50, 101] {
        let d = build_degree_sequence(&model, n).unwrap();
        let mut want = d.as_slice().to_vec();
        want.sort_unstable();
        for t in 0..5 {
            let g = sample_cm(&model, n, &SeedStream::new(t)).unwrap();
            let mut got = g.degree_sequence();
            got.sort_unstable();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let model = single_mark();
    let s = SeedStream::new(99);
    assert_eq!(sample_er(&model, 500, &s).unwrap(), sample_er(&model, 500, &s).unwrap());
    assert_ne!(sample_er(&model, 500, &s).unwrap(), sample_er(&model, 500, &s.split_index(1)).unwrap());
}

#[test]
fn config_round_trip_is_stable() {
    let text = "model=cm\nxi1=a,b\nxi2=c\ntheta1=t\ntheta2=s,u\ndelta=3\nr.1=0.5\nr.3=0.5\n\
                gamma.a:c=0.5\ngamma.b:_=0.25\ngamma._:c=0.25\nq.t:s=0.5\nq.t:u=0.5\nK=2\n";
    let model = parse_model_config(text).unwrap();
    let once = format_model_config(&model);
    assert_eq!(format_model_config(&parse_model_config(&once).unwrap()), once);
    assert!(matches!(model, Model::Cm(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn er_log_prob_is_finite_on_samples(seed in any::<u64>(), n in 2usize..40, a in 0.1f64..2.0, b in 0.1f64..2.0) {
        let marks = spaces(1, 1, 1, 1);
        let mut p = vec![0.0; 3];
        p[edge(&marks, Some(0), Some(0))] = a;
        p[edge(&marks, Some(0), None)] = b;
        p[edge(&marks, None, Some(0))] = b;
        prop_assume!(n as f64 > a + 2.0 * b);
        let model = ErModel::new(marks, p, vec![1.0]).unwrap();
        let g = sample_er(&model, n, &SeedStream::new(seed)).unwrap();
        let lp = log_prob_er(&model, &g).unwrap();
        prop_assert!(lp.is_finite() && lp <= 0.0);
    }

    #[test]
    fn degree_sequences_are_even_and_within_slack(n in 40usize..400, w in proptest::collection::vec(0.05f64..1.0, 4)) {
        let s: f64 = w.iter().sum();
        let r: Vec<f64> = w.iter().map(|x| x / s).collect();
        let marks = spaces(1, 1, 1, 1);
        let model = CmModel::new(marks, r.clone(), vec![0.5, 0.25, 0.25], vec![1.0], 1.0).unwrap();
        let d = build_degree_sequence(&model, n).unwrap();
        prop_assert_eq!(d.as_slice().iter().sum::<usize>() % 2, 0);
        let c = d.class_counts(3);
        let l1: f64 = c.iter().zip(&r).map(|(&ck, &rk)| (ck as f64 - n as f64 * rk).abs()).sum();
        prop_assert!(l1 <= (n as f64).sqrt());
    }

    #[test]
    fn marginal_intensities_sum_to_the_joint(a in 0.0f64..2.0, b in 0.01f64..2.0, c in 0.01f64..2.0) {
        let marks = spaces(1, 1, 1, 1);
        let mut p = vec![0.0; 3];
        p[edge(&marks, Some(0), Some(0))] = a;
        p[edge(&marks, Some(0), None)] = b;
        p[edge(&marks, None, Some(0))] = c;
        let m = ErModel::new(marks, p, vec![1.0]).unwrap();
        for side in Side::BOTH {
            let full = edge_marginal(m.p(), side, m.marks());
            prop_assert!((full.iter().sum::<f64>() - m.total_intensity()).abs() < 1e-12);
            prop_assert_eq!(&full[..full.len() - 1], &m.p_marginal(side)[..]);
        }
        prop_assert!((m.p_marginal(Side::First)[0] - (a + b)).abs() < 1e-12);
    }
}
