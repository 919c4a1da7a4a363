use serde::{Deserialize, Serialize};

use crate::ensembles::{build_degree_sequence, edge_marginal, vertex_marginal, CmModel, ErModel, Model};
use crate::entropy::thinning_stats;
use crate::error::Result;
use crate::marked_graph::{
    class_counts, degree_statistics, joint_counts, marginal, CountVectors, JointGraph, MarkSpaces, Side,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub deviation: f64,
    pub bound: f64,
    pub satisfied: bool,
}

impl ConditionCheck {
    fn within(name: &str, deviation: f64, bound: f64) -> Self {
        Self { name: name.into(), deviation, bound, satisfied: deviation <= bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalityReport {
    pub typical: bool,
    pub conditions: Vec<ConditionCheck>,
}

impl TypicalityReport {
    fn from_checks(conditions: Vec<ConditionCheck>) -> Self {
        Self { typical: conditions.iter().all(|c| c.satisfied), conditions }
    }
}

/// Targets of the typical set at a fixed `n`, with slack `n^{2/3}`.
#[derive(Debug, Clone, PartialEq)]
pub enum TypicalSpec {
    Er { marks: MarkSpaces, n: usize, p: Vec<f64>, q: Vec<f64> },
    Cm {
        marks: MarkSpaces,
        n: usize,
        /// Degree-class counts of the target degree sequence.
        classes: Vec<usize>,
        edges: u64,
        gamma: Vec<f64>,
        q: Vec<f64>,
        /// `joint[i][k][l] = P(X = k, X_{i+1} = l)`.
        joint: [Vec<Vec<f64>>; 2],
    },
}

/// Occurrences of marks the model never produces.
fn off_support(counts: &[u64], law: &[f64]) -> f64 {
    counts.iter().zip(law).filter(|(_, &w)| w == 0.0).map(|(&c, _)| c as f64).sum()
}

fn support_check(edge_counts: &[u64], edge_law: &[f64], vertex_counts: &[u64], vertex_law: &[f64]) -> ConditionCheck {
    ConditionCheck::within("support", off_support(edge_counts, edge_law) + off_support(vertex_counts, vertex_law), 0.0)
}

fn l1(counts: &[u64], target: impl Iterator<Item = f64>) -> f64 {
    counts.iter().zip(target).map(|(&c, t)| (c as f64 - t).abs()).sum()
}

impl TypicalSpec {
    pub fn er(model: &ErModel, n: usize) -> Self {
        Self::Er { marks: model.marks().clone(), n, p: model.p().to_vec(), q: model.q().to_vec() }
    }

    pub fn cm(model: &CmModel, n: usize) -> Result<Self> {
        let d = build_degree_sequence(model, n)?;
        let th = thinning_stats(model);
        Ok(Self::Cm {
            marks: model.marks().clone(),
            n,
            classes: d.class_counts(model.max_degree()),
            edges: d.edge_count() as u64,
            gamma: model.gamma().to_vec(),
            q: model.q().to_vec(),
            joint: [th.joint1, th.joint2],
        })
    }

    pub fn for_model(model: &Model, n: usize) -> Result<Self> {
        match model {
            Model::Er(m) => Ok(Self::er(m, n)),
            Model::Cm(m) => Self::cm(m, n),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Er { n, .. } | Self::Cm { n, .. } => *n,
        }
    }

    pub fn marks(&self) -> &MarkSpaces {
        match self {
            Self::Er { marks, .. } | Self::Cm { marks, .. } => marks,
        }
    }

    pub fn slack(&self) -> f64 {
        (self.n() as f64).powf(2.0 / 3.0)
    }

    pub fn check(&self, j: &JointGraph) -> TypicalityReport {
        let cv = joint_counts(j, self.marks());
        let d1 = marginal(j, Side::First).graph().degree_sequence();
        let d2 = marginal(j, Side::Second).graph().degree_sequence();
        self.check_counts(&cv, &d1, &d2)
    }

    /// Membership from joint counts and the two marginal degree sequences.
    pub fn check_counts(&self, cv: &CountVectors, d1: &[usize], d2: &[usize]) -> TypicalityReport {
        let slack = self.slack();
        if cv.n() != self.n() {
            return TypicalityReport::from_checks(vec![ConditionCheck::within("size", f64::INFINITY, 0.0)]);
        }
        let nf = self.n() as f64;
        match self {
            Self::Er { p, q, .. } => TypicalityReport::from_checks(vec![
                ConditionCheck::within("edge-counts", l1(&cv.edge_counts, p.iter().map(|&px| nf * px / 2.0)), slack),
                ConditionCheck::within("vertex-counts", l1(&cv.vertex_counts, q.iter().map(|&qt| nf * qt)), slack),
                support_check(&cv.edge_counts, p, &cv.vertex_counts, q),
            ]),
            Self::Cm { classes, edges, gamma, q, joint, .. } => {
                let have = class_counts(&cv.degrees);
                let width = have.len().max(classes.len());
                let class_dev: usize = (0..width)
                    .map(|k| have.get(k).copied().unwrap_or(0).abs_diff(classes.get(k).copied().unwrap_or(0)))
                    .sum();
                let m = *edges as f64;
                let mut edge_check =
                    ConditionCheck::within("edge-counts", l1(&cv.edge_counts, gamma.iter().map(|&g| m * g)), slack);
                edge_check.satisfied &= cv.edge_total() == *edges;
                let mut checks = vec![
                    ConditionCheck::within("degree-classes", class_dev as f64, 0.0),
                    edge_check,
                    ConditionCheck::within("vertex-counts", l1(&cv.vertex_counts, q.iter().map(|&qt| nf * qt)), slack),
                    support_check(&cv.edge_counts, gamma, &cv.vertex_counts, q),
                ];
                for (i, di) in [d1, d2].into_iter().enumerate() {
                    let stats = degree_statistics(&cv.degrees, Some(di)).expect("equal lengths");
                    let law = &joint[i];
                    let kmax = stats.class_counts.len().max(law.len());
                    let mut worst: f64 = 0.0;
                    for k in 0..kmax {
                        for l in 0..=k {
                            let target = law.get(k).and_then(|row| row.get(l)).copied().unwrap_or(0.0);
                            worst = worst.max((stats.c_pair(k, l) as f64 - nf * target).abs());
                        }
                    }
                    // a marginal degree above the joint degree is impossible; guard anyway
                    if di.iter().zip(&cv.degrees).any(|(&l, &k)| l > k) {
                        worst = f64::INFINITY;
                    }
                    let name = if i == 0 { "joint-degrees-1" } else { "joint-degrees-2" };
                    checks.push(ConditionCheck::within(name, worst, slack));
                }
                TypicalityReport::from_checks(checks)
            }
        }
    }

    /// Necessary condition on a single marginal, from its own edge and vertex counts.
    pub(crate) fn marginal_admissible(&self, side: Side, edge_counts: &[u64], vertex_counts: &[u64], max_deg: usize) -> bool {
        let slack = self.slack();
        let nf = self.n() as f64;
        let marks = self.marks();
        match self {
            Self::Er { p, q, .. } => {
                let pm = edge_marginal(p, side, marks);
                let qm = vertex_marginal(q, side, marks);
                l1(edge_counts, pm.iter().map(|&x| nf * x / 2.0)) <= slack
                    && l1(vertex_counts, qm.iter().map(|&t| nf * t)) <= slack
                    && off_support(edge_counts, &pm) + off_support(vertex_counts, &qm) == 0.0
            }
            Self::Cm { edges, gamma, q, classes, .. } => {
                let total: u64 = edge_counts.iter().sum();
                if total > *edges || max_deg + 1 > classes.len() {
                    return false;
                }
                let gm = edge_marginal(gamma, side, marks);
                let m = *edges as f64;
                let mut full = edge_counts.to_vec();
                full.push(edges - total);
                let qm = vertex_marginal(q, side, marks);
                l1(&full, gm.iter().map(|&g| m * g)) <= slack
                    && l1(vertex_counts, qm.iter().map(|&t| nf * t)) <= slack
                    && off_support(&full, &gm) + off_support(vertex_counts, &qm) == 0.0
            }
        }
    }
}

pub fn typical_er(j: &JointGraph, model: &ErModel) -> TypicalityReport {
    TypicalSpec::er(model, j.n()).check(j)
}

pub fn typical_cm(j: &JointGraph, model: &CmModel) -> Result<TypicalityReport> {
    Ok(TypicalSpec::cm(model, j.n())?.check(j))
}
