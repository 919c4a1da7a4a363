use serde::{Deserialize, Serialize};

use super::numerics::{entropy_unchecked, plogp, s_unchecked};
use super::thinning::thinning_stats;
use crate::ensembles::{CmModel, ErModel, Model};
use crate::error::{invalid, Result};
use crate::local_weak::{limit_degree, LimitDegrees};
use crate::marked_graph::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Er,
    Cm,
}

/// BC entropies (nats) and limit root degrees feeding the rate region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BcSummary {
    pub ensemble: Ensemble,
    pub sigma12: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma2given1: f64,
    pub sigma1given2: f64,
    pub d12: f64,
    pub d1: f64,
    pub d2: f64,
}

impl BcSummary {
    fn new(ensemble: Ensemble, sigma: [f64; 3], deg: LimitDegrees) -> Self {
        let [sigma12, sigma1, sigma2] = sigma;
        Self {
            ensemble,
            sigma12,
            sigma1,
            sigma2,
            sigma2given1: sigma12 - sigma1,
            sigma1given2: sigma12 - sigma2,
            d12: deg.d12,
            d1: deg.d1,
            d2: deg.d2,
        }
    }

    pub fn sigma(&self, side: Side) -> f64 {
        match side {
            Side::First => self.sigma1,
            Side::Second => self.sigma2,
        }
    }
}

/// `H(Q) + Σₓ s(pₓ)` and its per-domain analogues.
pub fn bc_entropy_er(model: &ErModel) -> BcSummary {
    let s12 = entropy_unchecked(model.q()) + model.p().iter().map(|&p| s_unchecked(p)).sum::<f64>();
    let side = |side: Side| {
        entropy_unchecked(&model.q_marginal(side))
            + model.p_marginal(side).iter().map(|&p| s_unchecked(p)).sum::<f64>()
    };
    let deg = limit_degree(&Model::Er(model.clone()));
    BcSummary::new(Ensemble::Er, [s12, side(Side::First), side(Side::Second)], deg)
}

/// Closed-form BC entropies of the configuration model.
pub fn bc_entropy_cm(model: &CmModel) -> Result<BcSummary> {
    let th = thinning_stats(model);
    let deg = limit_degree(&Model::Cm(model.clone()));
    if deg.d1 <= 0.0 || deg.d2 <= 0.0 {
        return invalid("both marginal limit degrees must be positive");
    }
    let s12 = -s_unchecked(deg.d12) + th.h_x - th.e_log_fact_x
        + entropy_unchecked(model.q())
        + deg.d12 / 2.0 * entropy_unchecked(model.gamma());
    let side = |side: Side, d: f64, h_xi: f64, e_log_xi: f64| {
        let g = model.gamma_marginal(side);
        let beta = model.beta(side);
        // H(Γᵢ | Γᵢ ≠ ∘ᵢ) from the renormalized law on Ξᵢ
        let h_cond: f64 = g[..g.len() - 1].iter().map(|&p| plogp(p / beta)).sum();
        -s_unchecked(d) + h_xi - e_log_xi + entropy_unchecked(&model.q_marginal(side)) + d / 2.0 * h_cond
    };
    let s1 = side(Side::First, deg.d1, th.h_x1, th.e_log_fact_x1);
    let s2 = side(Side::Second, deg.d2, th.h_x2, th.e_log_fact_x2);
    Ok(BcSummary::new(Ensemble::Cm, [s12, s1, s2], deg))
}

pub fn bc_entropy(model: &Model) -> Result<BcSummary> {
    match model {
        Model::Er(m) => Ok(bc_entropy_er(m)),
        Model::Cm(m) => bc_entropy_cm(m),
    }
}

/// Shannon entropy of the ER law at size `n`:
/// `C(n,2) · H({pₓ/n} ∪ {1 − Σpₓ/n}) + n H(q)`.
pub fn exact_shannon_er(model: &ErModel, n: usize) -> Result<f64> {
    let nf = n as f64;
    let total = model.total_intensity();
    if nf <= total {
        return invalid(format!("n = {n} must exceed the total intensity {total}"));
    }
    let absent = -total / nf;
    let h_edge: f64 = model.p().iter().map(|&p| plogp(p / nf)).sum::<f64>()
        - (1.0 + absent) * absent.ln_1p();
    let pairs = nf * (nf - 1.0) / 2.0;
    Ok(pairs * h_edge + nf * entropy_unchecked(model.q()))
}
