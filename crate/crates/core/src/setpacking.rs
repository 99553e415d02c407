//! Weighted k-set packing and its reduction to independent sets in the
//! conflict graph.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, VertexSet, Weight};

/// One weighted set over a dense universe `0..universe_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSet {
    pub weight: Weight,
    /// Sorted, duplicate-free element ids.
    pub elements: Vec<usize>,
}

/// A family of weighted sets, each with at most `k` elements.
///
/// Element ids are dense; `labels[e]` keeps the original token for element `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    k: usize,
    sets: Vec<WeightedSet>,
    labels: Vec<String>,
}

impl SetSystem {
    /// Validates sizes and weights. Elements are sorted and deduplicated per set.
    pub fn new(k: usize, sets: Vec<WeightedSet>, labels: Vec<String>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (index, mut set) in sets.into_iter().enumerate() {
            set.elements.sort_unstable();
            set.elements.dedup();
            if set.elements.is_empty() || set.elements.len() > k {
                return Err(Error::InvalidSet {
                    index,
                    reason: format!("has {} elements, expected 1..={k}", set.elements.len()),
                });
            }
            if !set.weight.is_positive() {
                return Err(Error::InvalidSet {
                    index,
                    reason: format!("weight {} is not positive", set.weight),
                });
            }
            if let Some(&e) = set.elements.iter().find(|&&e| e >= labels.len()) {
                return Err(Error::InvalidSet {
                    index,
                    reason: format!("element {e} has no label"),
                });
            }
            normalized.push(set);
        }
        Ok(Self {
            k,
            sets: normalized,
            labels,
        })
    }

    /// A system whose element labels are the decimal ids themselves.
    pub fn with_numeric_labels(
        k: usize,
        universe_size: usize,
        sets: Vec<WeightedSet>,
    ) -> Result<Self> {
        Self::new(k, sets, (0..universe_size).map(|e| e.to_string()).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sets(&self) -> &[WeightedSet] {
        &self.sets
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn universe_size(&self) -> usize {
        self.labels.len()
    }

    pub fn intersects(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.sets[a].elements, &self.sets[b].elements);
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// One vertex per set, an edge for every intersecting pair, `d = k + 1`.
    pub fn conflict_graph(&self) -> ProblemInstance {
        let mut edges = Vec::new();
        for a in 0..self.sets.len() {
            for b in a + 1..self.sets.len() {
                if self.intersects(a, b) {
                    edges.push((a, b));
                }
            }
        }
        let weights = self.sets.iter().map(|s| s.weight.clone()).collect();
        ProblemInstance::new(weights, &edges, self.k + 1)
            .expect("set system invariants yield a valid conflict graph")
    }

    /// Maps an independent set of the conflict graph back to set indices.
    ///
    /// Disjointness is rechecked on the sets themselves.
    pub fn lift_solution(&self, solution: &VertexSet) -> Result<Vec<usize>> {
        if let Some(&v) = solution.as_slice().last() {
            if v >= self.sets.len() {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    n: self.sets.len(),
                });
            }
        }
        let chosen = solution.as_slice();
        for (i, &a) in chosen.iter().enumerate() {
            for &b in &chosen[i + 1..] {
                if self.intersects(a, b) {
                    return Err(Error::NotIndependent(a, b));
                }
            }
        }
        Ok(chosen.to_vec())
    }

    pub fn packing_weight(&self, indices: &[usize]) -> Weight {
        indices
            .iter()
            .fold(Weight::zero(), |acc, &i| acc + &self.sets[i].weight)
    }
}
