//! Scalar helpers: `s(x)`, Shannon entropy, log-factorials and multinomials.

use std::sync::OnceLock;

use crate::error::{invalid, Result};

const DIST_TOL: f64 = 1e-9;
const TABLE_LEN: usize = 256;

/// `s(x) = x/2 − (x/2) ln x`, with `s(0) = 0`.
pub fn s_func(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return invalid(format!("s(x) needs finite x >= 0, got {x}"));
    }
    Ok(s_unchecked(x))
}

pub(crate) fn s_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x / 2.0 - x / 2.0 * x.ln()
    }
}

/// `−p ln p` with the `0 ln 0 = 0` convention.
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

pub(crate) fn entropy_unchecked(dist: &[f64]) -> f64 {
    dist.iter().copied().map(plogp).sum()
}

/// Shannon entropy in nats. `dist` must be nonnegative and sum to 1 within 1e-9.
pub fn shannon(dist: &[f64]) -> Result<f64> {
    if dist.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return invalid("distribution entries must be finite and nonnegative");
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > DIST_TOL {
        return invalid(format!("distribution sums to {total}, expected 1"));
    }
    Ok(entropy_unchecked(dist))
}

/// Entropy of a Bernoulli(`p`) variable.
pub fn binary_entropy(p: f64) -> f64 {
    plogp(p) + plogp(1.0 - p)
}

fn table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; TABLE_LEN];
        for k in 1..TABLE_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

/// Stirling correction `ln n! − (n ln n − n + ½ ln 2πn)` for `n ≥ 256`.
fn stirling_tail(n: f64) -> f64 {
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// `ln k!`, exact summation below 256 and the Stirling series above.
pub fn ln_factorial(k: u64) -> f64 {
    if (k as usize) < TABLE_LEN {
        return table()[k as usize];
    }
    let n = k as f64;
    n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + stirling_tail(n)
}

/// `ln(N!/R!)` for `R ≤ N`, accurate when `N` is huge and `N − R` is comparatively small.
pub fn ln_factorial_ratio(big: u64, small: u64) -> f64 {
    assert!(small <= big, "ln_factorial_ratio needs small <= big");
    let k = big - small;
    if (big as usize) < TABLE_LEN {
        return table()[big as usize] - table()[small as usize];
    }
    if k <= 64 {
        return (small + 1..=big).map(|i| (i as f64).ln()).sum();
    }
    if (small as usize) < TABLE_LEN {
        return ln_factorial(big) - ln_factorial(small);
    }
    let (n, r, kf) = (big as f64, small as f64, k as f64);
    // n ln n − r ln r − k = r ln(n/r) + k ln n − k
    let main = r * (kf / r).ln_1p() + kf * n.ln() - kf;
    main + 0.5 * (kf / r).ln_1p() + stirling_tail(n) - stirling_tail(r)
}

/// `ln( N! / (∏ b_i! · (N − Σ b_i)!) )`. Errors when `Σ b_i > N`.
pub fn log_multinomial(total: u64, parts: &[u64]) -> Result<f64> {
    let used: u64 = parts.iter().sum();
    if used > total {
        return invalid(format!("parts sum to {used}, exceeding {total}"));
    }
    let rest = total - used;
    // divide the largest factorial out first to keep cancellation small
    let mut all: Vec<u64> = parts.to_vec();
    all.push(rest);
    let (imax, &largest) = all.iter().enumerate().max_by_key(|(_, &b)| b).expect("nonempty");
    let mut v = ln_factorial_ratio(total, largest);
    for (i, &b) in all.iter().enumerate() {
        if i != imax {
            v -= ln_factorial(b);
        }
    }
    Ok(v)
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    log_multinomial(n, &[k]).expect("k <= n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_values() {
        assert_eq!(s_func(0.0).unwrap(), 0.0);
        assert_eq!(s_func(1.0).unwrap(), 0.5);
        assert!(s_func(std::f64::consts::E).unwrap().abs() < 1e-15);
        assert!(s_func(-1.0).is_err());
    }

    #[test]
    fn shannon_values() {
        assert!((shannon(&[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(shannon(&[1.0, 0.0]).unwrap(), 0.0);
        assert!(shannon(&[0.5, 0.4]).is_err());
    }

    #[test]
    fn multinomial_values() {
        assert!((log_multinomial(4, &[2, 2]).unwrap() - 6f64.ln()).abs() < 1e-13);
        assert_eq!(log_multinomial(9, &[9]).unwrap(), 0.0);
        assert!(log_multinomial(3, &[2, 2]).is_err());
        assert!((ln_binomial(6, 2) - 15f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn stirling_branch_matches_summation() {
        for k in [256u64, 300, 1000, 5000] {
            let direct: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
            assert!((ln_factorial(k) - direct).abs() / direct < 1e-14, "k={k}");
        }
    }

    #[test]
    fn ratio_branches_agree() {
        for (n, r) in [(10_000u64, 9_000u64), (1_000, 100), (5_000, 4_990), (300, 10)] {
            let direct: f64 = (r + 1..=n).map(|i| (i as f64).ln()).sum();
            assert!((ln_factorial_ratio(n, r) - direct).abs() < 1e-9 * direct.max(1.0), "{n} {r}");
        }
    }
}
