mod common;

use common::{edge, spaces};
use graphsw_core::ensembles::{CmModel, ErModel};
use graphsw_core::entropy::{
    bc_entropy_cm, bc_entropy_er, exact_shannon_er, lex_succ, lex_succeq, log_multinomial, mean, rate_region_contains,
    s_func, thinned_marginal, thinning_law, RateTuple,
};
use proptest::prelude::*;

fn factorial(k: u64) -> u128 {
    (1..=k as u128).product()
}

fn er_model(a: f64, b: f64, c: f64, q: f64) -> ErModel {
    let marks = spaces(1, 1, 1, 2);
    let mut p = vec![0.0; 3];
    p[edge(&marks, Some(0), Some(0))] = a;
    p[edge(&marks, Some(0), None)] = b;
    p[edge(&marks, None, Some(0))] = c;
    ErModel::new(marks, p, vec![q, 1.0 - q]).unwrap()
}

#[test]
fn s_function_values() {
    assert_eq!(s_func(0.0).unwrap(), 0.0);
    assert!((s_func(1.0).unwrap() - 0.5).abs() < 1e-15);
    assert!((s_func(2.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-15);
    assert!(s_func(-1.0).is_err());
}

#[test]
fn two_regular_cm_entropy_is_minus_one() {
    let marks = spaces(1, 1, 1, 1);
    let cm = CmModel::new_joint_only(marks, vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![1.0], 1.0).unwrap();
    let bc = bc_entropy_cm(&cm).unwrap();
    assert!((bc.sigma12 + 1.0).abs() < 1e-12, "{}", bc.sigma12);
}

proptest! {
    #[test]
    fn log_multinomial_matches_exact_factorials(parts in proptest::collection::vec(0u64..8, 1..5), extra in 0u64..6) {
        let total = parts.iter().sum::<u64>() + extra;
        let denom: u128 = parts.iter().map(|&k| factorial(k)).product::<u128>() * factorial(extra);
        let exact = (factorial(total) / denom) as f64;
        prop_assert!((log_multinomial(total, &parts).unwrap() - exact.ln()).abs() < 1e-9);
    }

    #[test]
    fn er_shannon_growth_matches_bc_entropy(a in 0.0f64..2.0, b in 0.05f64..2.0, c in 0.05f64..2.0, q in 0.05f64..0.95) {
        let m = er_model(a, b, c, q);
        let bc = bc_entropy_er(&m);
        let n = 10_000_000usize;
        let nf = n as f64;
        let h = exact_shannon_er(&m, n).unwrap();
        let normalized = (h - bc.d12 / 2.0 * nf * nf.ln()) / nf;
        prop_assert!((normalized - bc.sigma12).abs() < 1e-4, "{} vs {}", normalized, bc.sigma12);
        prop_assert!((bc.sigma2given1 - (bc.sigma12 - bc.sigma1)).abs() < 1e-12);
    }

    #[test]
    fn thinning_law_is_consistent(w in proptest::collection::vec(0.01f64..1.0, 2..7), eps in 0.0f64..=1.0) {
        let s: f64 = w.iter().sum();
        let r: Vec<f64> = w.iter().map(|x| x / s).collect();
        let law = thinning_law(&r, eps);
        for (k, row) in law.iter().enumerate() {
            prop_assert!((row.iter().sum::<f64>() - r[k]).abs() < 1e-12);
        }
        let x1 = thinned_marginal(&law);
        prop_assert!((mean(&x1) - eps * mean(&r)).abs() < 1e-12);
    }

    #[test]
    fn lexicographic_order_is_total(a in (-3i32..3, -3i32..3), b in (-3i32..3, -3i32..3)) {
        let (a, b) = ((a.0 as f64, a.1 as f64), (b.0 as f64, b.1 as f64));
        let count = [lex_succ(a, b), a == b, lex_succ(b, a)].iter().filter(|&&x| x).count();
        prop_assert_eq!(count, 1);
        prop_assert_eq!(lex_succeq(a, b), lex_succ(a, b) || a == b);
    }

    #[test]
    fn rate_region_is_upward_closed(
        t in (0.0f64..2.0, -1.0f64..4.0, 0.0f64..2.0, -1.0f64..4.0),
        bump in 0usize..4,
        by in 0.0f64..1.0,
    ) {
        let bc = bc_entropy_er(&er_model(1.0, 0.5, 0.5, 0.5));
        let tuple = RateTuple::new(t.0, t.1, t.2, t.3);
        let mut up = tuple;
        match bump {
            0 => up.alpha1 += by,
            1 => up.r1 += by,
            2 => up.alpha2 += by,
            _ => up.r2 += by,
        }
        if rate_region_contains(&bc, &tuple).contained {
            prop_assert!(rate_region_contains(&bc, &up).contained);
        }
    }
}
