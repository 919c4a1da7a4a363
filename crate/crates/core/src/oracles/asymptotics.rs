use serde::{Deserialize, Serialize};

use super::counting::enumerate_with_degrees;
use crate::entropy::{binary_entropy, entropy_unchecked, ln_binomial, ln_factorial, log_multinomial, s_unchecked, thinning_law};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MultinomialCase {
    /// `a_n = a n`, `b_i^n = b_i n`: `(1/n) ln multinomial → a H({b_i / a})`.
    Linear,
    /// `a_n = C(n, 2)`, `b_i^n = b_i n`: `(ln multinomial − Σ b_i^n ln n) / n → Σ s(2 b_i)`.
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialReport {
    pub case: MultinomialCase,
    pub limit: f64,
    /// `(n, finite-n value)`.
    pub values: Vec<(u64, f64)>,
}

impl MultinomialReport {
    pub fn errors(&self) -> Vec<f64> {
        self.values.iter().map(|&(_, v)| (v - self.limit).abs()).collect()
    }
}

/// Finite-n multinomial growth rates against their limits.
///
/// `Linear` takes `coeffs = [a, b_1, ..]` with `Σ b_i ≤ a`; the remainder
/// `a − Σ b_i` is an implicit last part. `Quadratic` takes `coeffs = [b_1, ..]`.
pub fn multinomial_asymptotics(case: MultinomialCase, coeffs: &[f64], ns: &[u64]) -> Result<MultinomialReport> {
    if coeffs.iter().any(|&c| !(c >= 0.0 && c.is_finite())) {
        return invalid("coefficients must be finite and nonnegative");
    }
    let (limit, parts): (f64, &[f64]) = match case {
        MultinomialCase::Linear => {
            let Some((&a, b)) = coeffs.split_first() else { return invalid("need a and at least one part") };
            let sum: f64 = b.iter().sum();
            if a <= 0.0 || sum > a * (1.0 + 1e-12) || b.is_empty() {
                return invalid("need a > 0 and parts summing to at most a");
            }
            let mut law: Vec<f64> = b.iter().map(|&x| x / a).collect();
            law.push((1.0 - sum / a).max(0.0));
            (a * entropy_unchecked(&law), b)
        }
        MultinomialCase::Quadratic => {
            if coeffs.is_empty() {
                return invalid("need at least one part");
            }
            (coeffs.iter().map(|&b| s_unchecked(2.0 * b)).sum(), coeffs)
        }
    };
    let mut values = Vec::with_capacity(ns.len());
    for &n in ns {
        let nf = n as f64;
        let counts: Vec<u64> = parts.iter().map(|&b| (b * nf).round() as u64).collect();
        let value = match case {
            MultinomialCase::Linear => log_multinomial((coeffs[0] * nf).round() as u64, &counts)? / nf,
            MultinomialCase::Quadratic => {
                let total = n * n.saturating_sub(1) / 2;
                let sum: u64 = counts.iter().sum();
                (log_multinomial(total, &counts)? - sum as f64 * nf.ln()) / nf
            }
        };
        values.push((n, value));
    }
    Ok(MultinomialReport { case, limit, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

/// `H(X₁, X − X₁)` against `H(X) + E[X] h(ε) − E[ln C(X, X₁)]` for `X ~ r`, `X₁ | X ~ Bin(X, ε)`.
pub fn thinning_identity(r: &[f64], eps: f64) -> Result<IdentityCheck> {
    crate::entropy::shannon(r)?;
    if !(0.0..=1.0).contains(&eps) {
        return invalid(format!("epsilon = {eps} must lie in [0, 1]"));
    }
    let law = thinning_law(r, eps);
    // (X₁, X − X₁) is in bijection with (X, X₁), so its entropy is that of the joint table
    let lhs = entropy_unchecked(&law.iter().flatten().copied().collect::<Vec<_>>());
    let mean: f64 = r.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
    let e_log_binom: f64 = law
        .iter()
        .enumerate()
        .flat_map(|(k, row)| row.iter().enumerate().map(move |(l, &p)| p * ln_binomial(k as u64, l as u64)))
        .sum();
    let rhs = entropy_unchecked(r) + mean * binary_entropy(eps) - e_log_binom;
    Ok(IdentityCheck { lhs, rhs, diff: (lhs - rhs).abs() })
}

/// Limit of `(ln |G_d| − (Σd / 2) ln n) / n` for degree sequences with empirical law `r`:
/// `−s(E Y) − E[ln Y!]`.
pub fn cm_count_asymptote(r: &[f64]) -> Result<f64> {
    crate::entropy::shannon(r)?;
    let mean: f64 = r.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
    if mean <= 0.0 {
        return invalid("degree law must have a positive mean");
    }
    let e_log_fact: f64 = r.iter().enumerate().map(|(k, &p)| p * ln_factorial(k as u64)).sum();
    Ok(-s_unchecked(mean) - e_log_fact)
}

/// Finite-n counterpart of [`cm_count_asymptote`] by exact enumeration.
pub fn cm_count_finite(d: &[usize]) -> Result<f64> {
    let count = enumerate_with_degrees(d)?;
    if count == 0 {
        return invalid("degree sequence is not graphic");
    }
    let n = d.len() as f64;
    let half_sum = d.iter().sum::<usize>() as f64 / 2.0;
    Ok(((count as f64).ln() - half_sum * n.ln()) / n)
}
