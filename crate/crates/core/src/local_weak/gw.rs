use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::Poisson;

use super::class::{canonical_tree, ClassKind, RootedClass, RootedGraph};
use super::dist::{NeighborhoodDist, Provenance};
use crate::ensembles::{CmModel, ErModel, Model};
use crate::error::{invalid, Result};
use crate::marked_graph::Side;
use crate::rng::{SeedStream, StreamRng};

/// `r'_k = (k + 1) r_{k+1} / E[X]`.
pub fn size_biased(r: &[f64]) -> Result<Vec<f64>> {
    let mean: f64 = r.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
    if mean <= 0.0 || r.len() < 2 {
        return invalid("size-biased law needs a positive mean");
    }
    Ok((0..r.len() - 1).map(|k| (k + 1) as f64 * r[k + 1] / mean).collect())
}

/// Offspring rule of a marked Galton–Watson tree.
enum Offspring {
    /// Independent Poisson counts per edge mark code.
    Poisson(Vec<(u32, Poisson<f64>)>),
    /// Root and non-root degree laws, with i.i.d. edge marks.
    Degree { root: WeightedIndex<f64>, rest: WeightedIndex<f64>, edge: WeightedIndex<f64> },
}

/// A marked Galton–Watson tree law over integer mark codes.
pub struct GwModel {
    kind: ClassKind,
    offspring: Offspring,
    vertex: WeightedIndex<f64>,
}

fn weights(w: &[f64]) -> WeightedIndex<f64> {
    WeightedIndex::new(w).expect("validated distribution")
}

impl GwModel {
    fn poisson(kind: ClassKind, p: &[f64], q: &[f64]) -> Self {
        let rates = p
            .iter()
            .enumerate()
            .filter(|(_, &px)| px > 0.0)
            .map(|(x, &px)| (x as u32, Poisson::new(px).expect("positive rate")))
            .collect();
        Self { kind, offspring: Offspring::Poisson(rates), vertex: weights(q) }
    }

    pub fn er(model: &ErModel) -> Self {
        Self::poisson(ClassKind::Joint, model.p(), model.q())
    }

    /// Poisson tree with the marginal intensities of one domain.
    pub fn er_marginal(model: &ErModel, side: Side) -> Self {
        Self::poisson(ClassKind::domain(side), &model.p_marginal(side), &model.q_marginal(side))
    }

    pub fn cm(model: &CmModel) -> Self {
        let rest = size_biased(model.r()).expect("r0 < 1 gives a positive mean");
        Self {
            kind: ClassKind::Joint,
            offspring: Offspring::Degree { root: weights(model.r()), rest: weights(&rest), edge: weights(model.gamma()) },
            vertex: weights(model.q()),
        }
    }

    pub fn joint(model: &Model) -> Self {
        match model {
            Model::Er(m) => Self::er(m),
            Model::Cm(m) => Self::cm(m),
        }
    }

    fn children(&self, is_root: bool, rng: &mut StreamRng) -> Vec<u32> {
        match &self.offspring {
            Offspring::Poisson(rates) => rates
                .iter()
                .flat_map(|(x, d)| std::iter::repeat_n(*x, d.sample(rng) as usize))
                .collect(),
            Offspring::Degree { root, rest, edge } => {
                let k = if is_root { root.sample(rng) } else { rest.sample(rng) };
                (0..k).map(|_| edge.sample(rng) as u32).collect()
            }
        }
    }

    pub fn sample(&self, h: u32, stream: &SeedStream) -> RootedClass {
        let mut rng = stream.rng();
        let mut g = RootedGraph { kind: self.kind, depth: h, vertex_marks: vec![self.vertex.sample(&mut rng) as u32], edges: vec![] };
        let mut frontier = vec![0usize];
        for level in 0..h {
            let mut next = Vec::new();
            for &u in &frontier {
                for x in self.children(level == 0, &mut rng) {
                    let w = g.vertex_marks.len();
                    g.vertex_marks.push(self.vertex.sample(&mut rng) as u32);
                    g.edges.push((u, w, x));
                    next.push(w);
                }
            }
            frontier = next;
        }
        canonical_tree(&g)
    }

    /// Empirical law of `samples` independent trees.
    pub fn sample_law(&self, h: u32, samples: usize, stream: &SeedStream) -> Result<NeighborhoodDist> {
        let mut counts: BTreeMap<RootedClass, u64> = BTreeMap::new();
        for i in 0..samples {
            *counts.entry(self.sample(h, &stream.split_index(i as u64))).or_default() += 1;
        }
        NeighborhoodDist::from_counts(h, Provenance::LimitSampled { samples }, counts)
    }
}

pub fn sample_gw_er(model: &ErModel, h: u32, stream: &SeedStream) -> RootedClass {
    GwModel::er(model).sample(h, stream)
}

pub fn sample_gw_cm(model: &CmModel, h: u32, stream: &SeedStream) -> RootedClass {
    GwModel::cm(model).sample(h, stream)
}

/// Empirical law of the joint limit tree from `samples` draws.
pub fn sample_gw_law(model: &Model, h: u32, samples: usize, stream: &SeedStream) -> Result<NeighborhoodDist> {
    GwModel::joint(model).sample_law(h, samples, stream)
}
