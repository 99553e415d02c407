//! Instance factories.
//!
//! Random generators draw from ChaCha8 seeded with `seed_from_u64`, so a seed
//! and parameter list reproduce an instance exactly.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, VertexSet, Weight};
use crate::setpacking::{SetSystem, WeightedSet};

/// Uniform weights `m / denominator` with `m` drawn from `min..=max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightRange {
    pub min: u64,
    pub max: u64,
    pub denominator: u64,
}

impl WeightRange {
    pub fn unit() -> Self {
        Self {
            min: 1,
            max: 1,
            denominator: 1,
        }
    }

    pub fn integers(min: u64, max: u64) -> Self {
        Self {
            min,
            max,
            denominator: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.min == 0 || self.min > self.max || self.denominator == 0 {
            return Err(Error::InvalidParameter(format!(
                "weight range {}..={} over {} must be positive and nonempty",
                self.min, self.max, self.denominator
            )));
        }
        Ok(())
    }

    fn draw(&self, rng: &mut impl Rng) -> Weight {
        let m = rng.random_range(self.min..=self.max);
        Weight::new(m.into(), self.denominator.into())
    }
}

impl Default for WeightRange {
    fn default() -> Self {
        Self::unit()
    }
}

/// Berman's tight example for ratio `d/2` under claw-only search.
#[derive(Clone, Debug)]
pub struct TightInstance {
    pub d: usize,
    pub instance: ProblemInstance,
    pub a_side: VertexSet,
    pub b_side: VertexSet,
    /// The subset of `{1, ..., d−1}` each vertex stands for.
    pub labels: Vec<Vec<usize>>,
}

/// Vertices `0..d−1` are the elements `1..d−1`; then come the singletons in
/// order and the pairs in lexicographic order. Every B-vertex is joined to
/// the elements it contains.
pub fn berman_tight(d: usize, weight: Weight) -> Result<TightInstance> {
    if d < 3 {
        return Err(Error::InvalidClawParameter { d, min: 3 });
    }
    let m = d - 1;
    let mut labels: Vec<Vec<usize>> = (1..=m).map(|i| vec![i]).collect();
    labels.extend((1..=m).map(|i| vec![i]));
    for i in 1..=m {
        for j in i + 1..=m {
            labels.push(vec![i, j]);
        }
    }
    let mut edges = Vec::new();
    for (b, members) in labels.iter().enumerate().skip(m) {
        for &element in members {
            edges.push((element - 1, b));
        }
    }
    let n = labels.len();
    let instance = ProblemInstance::new(vec![weight; n], &edges, d)?;
    Ok(TightInstance {
        d,
        instance,
        a_side: (0..m).collect(),
        b_side: (m..n).collect(),
        labels,
    })
}

/// Random weighted k-set system: each set has a uniform size in `1..=k` and
/// distinct elements from `0..universe_size`.
pub fn random_set_packing(
    num_sets: usize,
    universe_size: usize,
    k: usize,
    weights: WeightRange,
    seed: u64,
) -> Result<SetSystem> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if universe_size < k {
        return Err(Error::InvalidParameter(format!(
            "universe of {universe_size} elements cannot hold sets of size {k}"
        )));
    }
    weights.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = (0..num_sets)
        .map(|_| {
            let size = rng.random_range(1..=k);
            let mut elements = sample(&mut rng, universe_size, size).into_vec();
            elements.sort_unstable();
            WeightedSet {
                weight: weights.draw(&mut rng),
                elements,
            }
        })
        .collect();
    SetSystem::with_numeric_labels(k, universe_size, sets)
}

/// Disjoint cliques of the given sizes, numbered consecutively, with `d = 2`.
pub fn clique_union(sizes: &[usize], weights: WeightRange, seed: u64) -> Result<ProblemInstance> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one clique is required".into(),
        ));
    }
    weights.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = sizes.iter().sum();
    let w = (0..n).map(|_| weights.draw(&mut rng)).collect();
    let mut edges = Vec::new();
    let mut offset = 0;
    for &size in sizes {
        for u in offset..offset + size {
            for v in u + 1..offset + size {
                edges.push((u, v));
            }
        }
        offset += size;
    }
    ProblemInstance::new(w, &edges, 2)
}

/// Between one and `max_cliques` cliques of sizes `1..=max_size`, drawn from
/// the seed, then weighted as in [`clique_union`].
pub fn random_clique_union(
    max_cliques: usize,
    max_size: usize,
    weights: WeightRange,
    seed: u64,
) -> Result<ProblemInstance> {
    if max_cliques == 0 || max_size == 0 {
        return Err(Error::InvalidParameter(
            "clique count and size bounds must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=max_cliques);
    let sizes: Vec<usize> = (0..count).map(|_| rng.random_range(1..=max_size)).collect();
    clique_union(&sizes, weights, rng.random())
}

/// Result of rejection sampling.
#[derive(Clone, Debug)]
pub enum SampleOutcome {
    Found {
        instance: ProblemInstance,
        attempts: usize,
    },
    Exhausted {
        attempts: usize,
    },
}

impl SampleOutcome {
    pub fn instance(self) -> Option<ProblemInstance> {
        match self {
            SampleOutcome::Found { instance, .. } => Some(instance),
            SampleOutcome::Exhausted { .. } => None,
        }
    }
}

pub const MAX_CLAW_FREE_VERTICES: usize = 30;

/// Draws `G(n, p)` graphs until one is d-claw free, or gives up after
/// `max_attempts` draws.
pub fn random_claw_free(
    n: usize,
    edge_prob: f64,
    d: usize,
    weights: WeightRange,
    seed: u64,
    max_attempts: usize,
) -> Result<SampleOutcome> {
    if n > MAX_CLAW_FREE_VERTICES {
        return Err(Error::LimitExceeded {
            what: "vertex count",
            value: n,
            limit: MAX_CLAW_FREE_VERTICES,
        });
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {edge_prob} is not in [0, 1]"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidClawParameter { d, min: 2 });
    }
    weights.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(edge_prob) {
                    edges.push((u, v));
                }
            }
        }
        let w = (0..n).map(|_| weights.draw(&mut rng)).collect();
        let instance = ProblemInstance::new(w, &edges, d)?;
        if instance.is_d_claw_free(d).is_free() {
            return Ok(SampleOutcome::Found {
                instance,
                attempts: attempt,
            });
        }
    }
    Ok(SampleOutcome::Exhausted {
        attempts: max_attempts,
    })
}
