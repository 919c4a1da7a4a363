use serde::{Deserialize, Serialize};

use super::bc::BcSummary;
use crate::error::{invalid, Result};

/// `(α₁, R₁, α₂, R₂)`: code sizes `ln Lᵢ = αᵢ n ln n + Rᵢ n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateTuple {
    pub alpha1: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    pub alpha2: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
}

impl RateTuple {
    pub fn new(alpha1: f64, r1: f64, alpha2: f64, r2: f64) -> Self {
        Self { alpha1, r1, alpha2, r2 }
    }

    /// Parses `a1,R1,a2,R2`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| crate::Error::InvalidArgument(format!("bad rate tuple {text:?}")))?;
        match parts[..] {
            [a1, r1, a2, r2] if parts.iter().all(|x| x.is_finite()) => Ok(Self::new(a1, r1, a2, r2)),
            _ => invalid(format!("rate tuple needs four finite numbers, got {text:?}")),
        }
    }
}

/// `a ≻ b`: larger `α`, or equal `α` and larger `R`.
pub fn lex_succ(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// `a ⪰ b`: `a ≻ b` or `a = b`.
pub fn lex_succeq(a: (f64, f64), b: (f64, f64)) -> bool {
    lex_succ(a, b) || a == b
}

/// Thresholds are built from logarithms along different code paths, so values
/// agreeing to this relative precision count as equal.
const EQ_RTOL: f64 = 1e-12;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_RTOL * a.abs().max(b.abs()).max(1.0)
}

fn succeq_num(a: (f64, f64), b: (f64, f64)) -> bool {
    if near(a.0, b.0) {
        a.1 > b.1 || near(a.1, b.1)
    } else {
        a.0 > b.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    /// 1: first encoder, 2: second encoder, 3: sum rate.
    pub index: u8,
    pub name: String,
    pub alpha: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub threshold_alpha: f64,
    #[serde(rename = "threshold_R")]
    pub threshold_r: f64,
    pub satisfied: bool,
    /// `α` equals the threshold, so the `R` coordinate decides.
    pub binding: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub contained: bool,
    pub constraints: Vec<ConstraintCheck>,
}

impl RegionVerdict {
    pub fn failing(&self) -> Vec<u8> {
        self.constraints.iter().filter(|c| !c.satisfied).map(|c| c.index).collect()
    }
}

/// Membership of `t` in the achievable region described by `bc`.
pub fn rate_region_contains(bc: &BcSummary, t: &RateTuple) -> RegionVerdict {
    let specs = [
        (1u8, "first", (t.alpha1, t.r1), ((bc.d12 - bc.d2) / 2.0, bc.sigma1given2)),
        (2, "second", (t.alpha2, t.r2), ((bc.d12 - bc.d1) / 2.0, bc.sigma2given1)),
        (3, "sum", (t.alpha1 + t.alpha2, t.r1 + t.r2), (bc.d12 / 2.0, bc.sigma12)),
    ];
    let constraints: Vec<ConstraintCheck> = specs
        .into_iter()
        .map(|(index, name, rate, thr)| ConstraintCheck {
            index,
            name: name.to_string(),
            alpha: rate.0,
            r: rate.1,
            threshold_alpha: thr.0,
            threshold_r: thr.1,
            satisfied: succeq_num(rate, thr),
            binding: near(rate.0, thr.0),
        })
        .collect();
    RegionVerdict { contained: constraints.iter().all(|c| c.satisfied), constraints }
}
