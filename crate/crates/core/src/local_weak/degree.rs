use serde::{Deserialize, Serialize};

use crate::ensembles::Model;
use crate::marked_graph::Side;

/// Expected root degrees of the joint limit and of both marginal limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitDegrees {
    pub d12: f64,
    pub d1: f64,
    pub d2: f64,
}

impl LimitDegrees {
    pub fn get(&self, side: Side) -> f64 {
        match side {
            Side::First => self.d1,
            Side::Second => self.d2,
        }
    }
}

pub fn limit_degree(model: &Model) -> LimitDegrees {
    match model {
        Model::Er(m) => LimitDegrees {
            d12: m.total_intensity(),
            d1: m.p_marginal(Side::First).iter().sum(),
            d2: m.p_marginal(Side::Second).iter().sum(),
        },
        Model::Cm(m) => {
            let d = m.mean_degree();
            LimitDegrees { d12: d, d1: m.beta(Side::First) * d, d2: m.beta(Side::Second) * d }
        }
    }
}
