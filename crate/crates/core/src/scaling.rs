//! Scale-and-truncate wrapper bounding the number of search iterations.
//!
//! Weights are rescaled so the greedy solution weighs `N·|V|`, rounded down to
//! integers, and vertices that round to zero are dropped. Each iteration then
//! raises the integer potential by at least one, which caps the run at
//! `(d−1)²·N²·|V|²` iterations, at a loss of at most `N/(N−1)` in the ratio.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, VertexSet, Weight};
use crate::search::{greedy, run_local_search, SearchConfig, Solution, Trace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingConfig {
    pub n: Weight,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            n: Weight::from_integer(2.into()),
        }
    }
}

impl ScalingConfig {
    pub fn new(n: Weight) -> Result<Self> {
        if n <= Weight::one() {
            return Err(Error::InvalidParameter(format!(
                "scaling constant N must exceed 1, got {n}"
            )));
        }
        Ok(Self { n })
    }

    /// The `N/(N−1)` factor lost to truncation.
    pub fn guarantee_loss(&self) -> Weight {
        &self.n / (&self.n - Weight::one())
    }
}

#[derive(Clone, Debug)]
pub struct ScaledInstance {
    /// Truncated instance over the surviving vertices, renumbered densely.
    pub instance: ProblemInstance,
    /// `survivors[i]` is the original id of truncated vertex `i`.
    pub survivors: Vec<usize>,
    pub factor: Weight,
    /// `⌊factor · w(v)⌋` for every original vertex, zero for deleted ones.
    pub integer_weights: Vec<Weight>,
    pub greedy_anchor: VertexSet,
    /// `factor · w(A')`, which equals `N·|V|`.
    pub scaled_anchor_weight: Weight,
}

impl ScaledInstance {
    pub fn deleted(&self) -> usize {
        self.integer_weights.len() - self.survivors.len()
    }

    /// Translates a set of truncated ids back to original ids.
    pub fn lift(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|v| self.survivors[v]).collect()
    }
}

pub fn scale_truncate(inst: &ProblemInstance, cfg: &ScalingConfig) -> Result<ScaledInstance> {
    ScalingConfig::new(cfg.n.clone())?;
    if inst.n() == 0 {
        return Ok(ScaledInstance {
            instance: inst.clone(),
            survivors: Vec::new(),
            factor: Weight::one(),
            integer_weights: Vec::new(),
            greedy_anchor: VertexSet::new(),
            scaled_anchor_weight: Weight::zero(),
        });
    }
    let anchor = greedy(inst);
    let factor = &cfg.n * Weight::from_integer(inst.n().into()) / anchor.weight();
    let integer_weights: Vec<Weight> = inst
        .weights()
        .iter()
        .map(|w| (&factor * w).floor())
        .collect();
    let survivors: Vec<usize> = (0..inst.n())
        .filter(|&v| !integer_weights[v].is_zero())
        .collect();
    let mut new_id = vec![usize::MAX; inst.n()];
    for (i, &v) in survivors.iter().enumerate() {
        new_id[v] = i;
    }
    let edges: Vec<(usize, usize)> = inst
        .edges()
        .filter(|&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
        .map(|(u, v)| (new_id[u], new_id[v]))
        .collect();
    let weights = survivors
        .iter()
        .map(|&v| integer_weights[v].clone())
        .collect();
    let instance = ProblemInstance::new(weights, &edges, inst.d())?;
    Ok(ScaledInstance {
        instance,
        survivors,
        scaled_anchor_weight: &factor * anchor.weight(),
        factor,
        integer_weights,
        greedy_anchor: anchor.into_vertices(),
    })
}

#[derive(Clone, Debug)]
pub struct ScaledStats {
    pub iterations: usize,
    /// `(d−1)²·N²·|V|²` for the original `|V|`.
    pub iteration_bound: Weight,
    pub factor: Weight,
    pub deleted: usize,
    /// Search trace on the truncated instance; potentials are `⌊w⌋²(A)`.
    pub trace: Trace,
}

/// Runs the local search on the truncated integer weights and reports the
/// result under the original weights.
pub fn solve_scaled<'a>(
    inst: &'a ProblemInstance,
    cfg: &ScalingConfig,
    search: &SearchConfig,
) -> Result<(Solution<'a>, ScaledStats)> {
    let scaled = scale_truncate(inst, cfg)?;
    let (truncated, trace) = run_local_search(&scaled.instance, search, None)?;
    let lifted = scaled.lift(truncated.vertices());
    let solution = Solution::new(inst, lifted)?;
    let dm1 = Weight::from_integer(inst.d().saturating_sub(1).into());
    let nv = Weight::from_integer(inst.n().into());
    let iteration_bound = &dm1 * &dm1 * &cfg.n * &cfg.n * &nv * &nv;
    Ok((
        solution,
        ScaledStats {
            iterations: trace.iterations(),
            iteration_bound,
            deleted: scaled.deleted(),
            factor: scaled.factor,
            trace,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::berman_tight;

    fn int(v: i64) -> Weight {
        Weight::from_integer(v.into())
    }

    #[test]
    fn factor_from_greedy_weight() {
        // ten isolated vertices: greedy takes them all, weight 10 / 2 = 5
        let inst = ProblemInstance::new(vec![Weight::new(1.into(), 2.into()); 10], &[], 2).unwrap();
        let s = scale_truncate(&inst, &ScalingConfig::default()).unwrap();
        assert_eq!(s.factor, int(4));
        assert_eq!(s.scaled_anchor_weight, int(20));
    }

    #[test]
    fn unit_weights_scale_uniformly() {
        let t = berman_tight(4, Weight::one()).unwrap();
        let s = scale_truncate(&t.instance, &ScalingConfig::default()).unwrap();
        let anchor = s.greedy_anchor.len();
        let expected =
            (Weight::from_integer(18.into()) / Weight::from_integer(anchor.into())).floor();
        assert_eq!(s.deleted(), 0);
        assert!(s.integer_weights.iter().all(|w| *w == expected));
        assert!(expected >= int(2));
    }

    #[test]
    fn light_vertices_are_deleted() {
        // greedy picks vertex 0 (weight 1); factor = 2·2/1 = 4; w = 1/8 scales to 1/2
        let inst =
            ProblemInstance::new(vec![int(1), Weight::new(1.into(), 8.into())], &[(0, 1)], 2)
                .unwrap();
        let s = scale_truncate(&inst, &ScalingConfig::default()).unwrap();
        assert_eq!(s.factor, int(4));
        assert_eq!(s.survivors, vec![0]);
        assert_eq!(s.deleted(), 1);
    }

    #[test]
    fn iteration_bound_formula() {
        let inst = ProblemInstance::unweighted(9, &[], 4).unwrap();
        let (_, stats) =
            solve_scaled(&inst, &ScalingConfig::default(), &SearchConfig::bounded()).unwrap();
        assert_eq!(stats.iteration_bound, int(2916));
        assert!(int(stats.iterations as i64) <= stats.iteration_bound);
    }

    #[test]
    fn n_must_exceed_one() {
        assert!(ScalingConfig::new(int(1)).is_err());
        assert_eq!(
            ScalingConfig::new(int(3)).unwrap().guarantee_loss(),
            Weight::new(3.into(), 2.into())
        );
    }

    #[test]
    fn empty_instance() {
        let inst = ProblemInstance::unweighted(0, &[], 2).unwrap();
        let s = scale_truncate(&inst, &ScalingConfig::default()).unwrap();
        assert_eq!(s.instance.n(), 0);
    }
}
