use serde::{Deserialize, Serialize};

use super::decoder::{encode_with, TypicalIndex};
use super::params::{Binner, CodeParams};
use super::typical::TypicalSpec;
use crate::ensembles::{sample_model, Model};
use crate::error::Result;
use crate::marked_graph::JointGraph;
use crate::rng::SeedStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorEvent {
    /// The source is atypical.
    E1,
    /// A typical competitor differing in both marginals shares both bins.
    E2,
    /// A typical competitor with the same first marginal shares the second bin.
    E3,
    E4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Unique,
    NotFound,
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub typical: bool,
    /// The decoder returned the source graph.
    pub decoded: bool,
    pub outcome: Outcome,
    pub event: Option<ErrorEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub count: u64,
    pub rate: f64,
    pub lo: f64,
    pub hi: f64,
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64) -> Rate {
    if n == 0 {
        return Rate { count: 0, rate: 0.0, lo: 0.0, hi: 1.0 };
    }
    let z = 1.959_963_984_540_054_f64;
    let (kf, nf) = (k as f64, n as f64);
    let p = kf / nf;
    let denom = 1.0 + z * z / nf;
    let centre = (p + z * z / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    Rate { count: k, rate: p, lo: (centre - half).max(0.0), hi: (centre + half).min(1.0) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub trials: u64,
    pub pe: Rate,
    pub e1: Rate,
    pub e2: Rate,
    pub e3: Rate,
    pub e4: Rate,
    pub not_found: u64,
    pub ambiguous: u64,
    pub typical_set_size: usize,
}

/// Monte Carlo driver: fixed code parameters, model and source seed.
///
/// Trial `t` draws its source from `seed` and its binning key from
/// `params.seed`, both split by `t`, so runs with different rates but equal
/// seeds are paired.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: CodeParams,
    model: Model,
    index: TypicalIndex,
    source: SeedStream,
    binning: SeedStream,
}

impl Simulator {
    pub fn new(params: CodeParams, model: &Model, seed: u64) -> Result<Self> {
        let spec = TypicalSpec::for_model(model, params.n)?;
        Self::with_index(params, model, TypicalIndex::build(&spec)?, seed)
    }

    /// Reuses a prebuilt index, which must describe the same model at the same `n`.
    pub fn with_index(params: CodeParams, model: &Model, index: TypicalIndex, seed: u64) -> Result<Self> {
        if index.spec().n() != params.n {
            return crate::error::invalid("typical index was built for a different n");
        }
        Ok(Self {
            params,
            model: model.clone(),
            index,
            source: SeedStream::new(seed).split("source"),
            binning: SeedStream::new(params.seed).split("binning"),
        })
    }

    pub fn index(&self) -> &TypicalIndex {
        &self.index
    }

    pub fn sample_source(&self, trial: u64) -> Result<JointGraph> {
        sample_model(&self.model, self.params.n, &self.source.split_index(trial))
    }

    pub fn binner(&self, trial: u64) -> Binner {
        Binner::with_key(&self.params, self.binning.split_index(trial))
    }

    pub fn trial(&self, trial: u64) -> Result<TrialRecord> {
        let src = self.sample_source(trial)?;
        let binner = self.binner(trial);
        let bins = encode_with(&src, &binner);
        let ix = &self.index;
        let typical = ix.spec().check(&src).typical;
        let (s1, s2) = ix.locate(&src);
        let (m1, m2) = ix.bin_masks(&binner, &bins);
        let event = if !typical {
            Some(ErrorEvent::E1)
        } else {
            let (s1i, s2i) = (s1.expect("typical marginals are admissible"), s2.expect("typical marginals are admissible"));
            if ix.has_cross_competitor(&m1, &m2, s1, s2) {
                Some(ErrorEvent::E2)
            } else if ix.has_second_competitor(&m2, s1i, s2) {
                Some(ErrorEvent::E3)
            } else if ix.has_first_competitor(&m1, s1, s2i) {
                Some(ErrorEvent::E4)
            } else {
                None
            }
        };
        let (outcome, decoded) = match event {
            None => (Outcome::Unique, true),
            Some(ErrorEvent::E1) => match ix.survivors(&m1, &m2, 2).len() {
                0 => (Outcome::NotFound, false),
                1 => (Outcome::Unique, false),
                _ => (Outcome::Ambiguous, false),
            },
            Some(_) => (Outcome::Ambiguous, false),
        };
        Ok(TrialRecord {
            trial,
            seed: self.source.split_index(trial).as_u64(),
            typical,
            decoded,
            outcome,
            event,
        })
    }

    pub fn summarize(&self, records: &[TrialRecord]) -> SimSummary {
        let n = records.len() as u64;
        let count = |f: &dyn Fn(&TrialRecord) -> bool| records.iter().filter(|r| f(r)).count() as u64;
        let ev = |e: ErrorEvent| wilson(count(&|r| r.event == Some(e)), n);
        SimSummary {
            trials: n,
            pe: wilson(count(&|r| !r.decoded), n),
            e1: ev(ErrorEvent::E1),
            e2: ev(ErrorEvent::E2),
            e3: ev(ErrorEvent::E3),
            e4: ev(ErrorEvent::E4),
            not_found: count(&|r| r.outcome == Outcome::NotFound),
            ambiguous: count(&|r| r.outcome == Outcome::Ambiguous),
            typical_set_size: self.index.size(),
        }
    }
}

/// Sequential convenience wrapper over [`Simulator`].
pub fn simulate(params: CodeParams, model: &Model, trials: u64, seed: u64) -> Result<(SimSummary, Vec<TrialRecord>)> {
    let sim = Simulator::new(params, model, seed)?;
    let records = (0..trials).map(|t| sim.trial(t)).collect::<Result<Vec<_>>>()?;
    Ok((sim.summarize(&records), records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets_the_estimate() {
        let r = wilson(30, 100);
        assert!(r.lo < 0.3 && 0.3 < r.hi);
        assert_eq!(wilson(0, 10).lo, 0.0);
        assert!(wilson(10, 10).hi <= 1.0);
    }
}
