use serde::Serialize;

use super::numerics::{entropy_unchecked, ln_binomial, ln_factorial};
use crate::ensembles::CmModel;
use crate::marked_graph::Side;

/// Law of `(X, Xᵢ)` where `Xᵢ` keeps each of `X` trials independently with probability `β`.
///
/// `law[k][l] = P(X = k, Xᵢ = l) = r_k C(k, l) βˡ (1 − β)^{k−l}`.
pub fn thinning_law(r: &[f64], beta: f64) -> Vec<Vec<f64>> {
    r.iter()
        .enumerate()
        .map(|(k, &rk)| {
            (0..=k)
                .map(|l| {
                    if rk == 0.0 {
                        return 0.0;
                    }
                    let c = ln_binomial(k as u64, l as u64).exp();
                    rk * c * beta.powi(l as i32) * (1.0 - beta).powi((k - l) as i32)
                })
                .collect()
        })
        .collect()
}

/// Marginal law of the thinned variable.
pub fn thinned_marginal(law: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; law.len()];
    for row in law {
        for (l, &p) in row.iter().enumerate() {
            out[l] += p;
        }
    }
    out
}

/// `E[ln Y!]` for a law on `0..len`.
pub fn expected_log_factorial(law: &[f64]) -> f64 {
    law.iter().enumerate().map(|(k, &p)| p * ln_factorial(k as u64)).sum()
}

pub fn mean(law: &[f64]) -> f64 {
    law.iter().enumerate().map(|(k, &p)| k as f64 * p).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinningStats {
    pub r: Vec<f64>,
    pub beta1: f64,
    pub beta2: f64,
    /// `joint1[k][l] = P(X = k, X₁ = l)`.
    pub joint1: Vec<Vec<f64>>,
    pub joint2: Vec<Vec<f64>>,
    pub mean_x: f64,
    pub h_x: f64,
    pub h_x1: f64,
    pub h_x2: f64,
    pub e_log_fact_x: f64,
    pub e_log_fact_x1: f64,
    pub e_log_fact_x2: f64,
}

impl ThinningStats {
    pub fn joint(&self, side: Side) -> &[Vec<f64>] {
        match side {
            Side::First => &self.joint1,
            Side::Second => &self.joint2,
        }
    }

    pub fn beta(&self, side: Side) -> f64 {
        match side {
            Side::First => self.beta1,
            Side::Second => self.beta2,
        }
    }
}

pub fn thinning_stats(model: &CmModel) -> ThinningStats {
    let r = model.r().to_vec();
    let (beta1, beta2) = (model.beta(Side::First), model.beta(Side::Second));
    let joint1 = thinning_law(&r, beta1);
    let joint2 = thinning_law(&r, beta2);
    let (x1, x2) = (thinned_marginal(&joint1), thinned_marginal(&joint2));
    ThinningStats {
        mean_x: mean(&r),
        h_x: entropy_unchecked(&r),
        h_x1: entropy_unchecked(&x1),
        h_x2: entropy_unchecked(&x2),
        e_log_fact_x: expected_log_factorial(&r),
        e_log_fact_x1: expected_log_factorial(&x1),
        e_log_fact_x2: expected_log_factorial(&x2),
        r,
        beta1,
        beta2,
        joint1,
        joint2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_thinning_of_two() {
        let law = thinning_law(&[0.0, 0.0, 1.0], 0.5);
        assert_eq!(thinned_marginal(&law), vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn degenerate_betas() {
        let r = [0.1, 0.3, 0.6];
        assert_eq!(thinned_marginal(&thinning_law(&r, 1.0)), r.to_vec());
        assert_eq!(thinned_marginal(&thinning_law(&r, 0.0)), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn thinned_mean_scales() {
        let r = [0.1, 0.2, 0.3, 0.4];
        let law = thinning_law(&r, 0.3);
        assert!((mean(&thinned_marginal(&law)) - 0.3 * mean(&r)).abs() < 1e-14);
        let total: f64 = law.iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
