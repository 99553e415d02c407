//! Brute-force ground truth for small instances.
//!
//! Nothing here shares candidate generation with [`crate::search`]; the
//! improvement checks enumerate every independent set and evaluate it with the
//! plain set operations of [`ProblemInstance`].

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, VertexSet, Weight};
use crate::search::Solution;

/// Size caps for the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_mwis_vertices: usize,
    pub max_improvement_vertices: usize,
    pub max_size_bound: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_mwis_vertices: 30,
            max_improvement_vertices: 20,
            max_size_bound: 12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult<'a> {
    pub optimum: Solution<'a>,
    pub weight: Weight,
    pub nodes: u64,
}

/// Maximum weight independent set by branch and bound.
///
/// Among several maximizers the lexicographically least sorted id sequence is
/// returned.
pub fn exact_mwis(inst: &ProblemInstance) -> Result<OracleResult<'_>> {
    exact_mwis_with_limits(inst, &OracleLimits::default())
}

pub fn exact_mwis_with_limits<'a>(
    inst: &'a ProblemInstance,
    limits: &OracleLimits,
) -> Result<OracleResult<'a>> {
    if inst.n() > limits.max_mwis_vertices {
        return Err(Error::LimitExceeded {
            what: "vertex count",
            value: inst.n(),
            limit: limits.max_mwis_vertices,
        });
    }
    let (numers, _) = inst.integer_weights();
    let mut bb = BranchAndBound {
        inst,
        weights: &numers,
        blocked: vec![0; inst.n()],
        chosen: Vec::new(),
        current: BigInt::zero(),
        best: None,
        nodes: 0,
    };
    bb.branch(0);
    let set: VertexSet = bb.best.map(|(_, s)| s).unwrap_or_default().into();
    let optimum = Solution::new(inst, set)?;
    Ok(OracleResult {
        weight: optimum.weight().clone(),
        optimum,
        nodes: bb.nodes,
    })
}

struct BranchAndBound<'a> {
    inst: &'a ProblemInstance,
    weights: &'a [BigInt],
    blocked: Vec<u32>,
    chosen: Vec<usize>,
    current: BigInt,
    best: Option<(BigInt, Vec<usize>)>,
    nodes: u64,
}

impl BranchAndBound<'_> {
    // Include-first branching visits maximizers in lexicographic order, and
    // only strictly heavier sets replace the incumbent.
    fn branch(&mut self, next: usize) {
        self.nodes += 1;
        let n = self.inst.n();
        if let Some((best, _)) = &self.best {
            let optimistic = (next..n)
                .filter(|&v| self.blocked[v] == 0)
                .fold(self.current.clone(), |acc, v| acc + &self.weights[v]);
            if optimistic <= *best {
                return;
            }
        }
        let Some(v) = (next..n).find(|&v| self.blocked[v] == 0) else {
            if self
                .best
                .as_ref()
                .is_none_or(|(best, _)| self.current > *best)
            {
                self.best = Some((self.current.clone(), self.chosen.clone()));
            }
            return;
        };

        self.chosen.push(v);
        self.current += &self.weights[v];
        for &u in self.inst.neighbors(v) {
            self.blocked[u] += 1;
        }
        self.branch(v + 1);
        for &u in self.inst.neighbors(v) {
            self.blocked[u] -= 1;
        }
        self.current -= &self.weights[v];
        self.chosen.pop();

        self.branch(v + 1);
    }
}

/// Every independent `X` with `|X| <= size_bound` is tested for
/// `w²(X) > w²(N(X, A))`; the first hit in include-first order is returned.
pub fn exhaustive_improvement(
    inst: &ProblemInstance,
    a: &VertexSet,
    size_bound: usize,
) -> Result<Option<VertexSet>> {
    exhaustive_improvement_with_limits(inst, a, size_bound, &OracleLimits::default())
}

pub fn exhaustive_improvement_with_limits(
    inst: &ProblemInstance,
    a: &VertexSet,
    size_bound: usize,
    limits: &OracleLimits,
) -> Result<Option<VertexSet>> {
    check_improvement_limits(inst, size_bound, limits)?;
    inst.ensure_independent(a)?;
    let mut hit = None;
    let mut current = Vec::new();
    enumerate_independent(inst, 0, size_bound, &mut current, &mut |x| {
        let x = VertexSet::from(x.to_vec());
        if improves(inst, a, &x) {
            hit = Some(x);
            true
        } else {
            false
        }
    });
    Ok(hit)
}

/// Same as [`exhaustive_improvement`] restricted to talon sets of claws:
/// single vertices, or at most `d − 1` vertices with a common neighbor
/// outside the set.
pub fn exhaustive_claw_improvement(
    inst: &ProblemInstance,
    a: &VertexSet,
) -> Result<Option<VertexSet>> {
    exhaustive_claw_improvement_with_limits(inst, a, &OracleLimits::default())
}

pub fn exhaustive_claw_improvement_with_limits(
    inst: &ProblemInstance,
    a: &VertexSet,
    limits: &OracleLimits,
) -> Result<Option<VertexSet>> {
    if inst.n() > limits.max_improvement_vertices {
        return Err(Error::LimitExceeded {
            what: "vertex count",
            value: inst.n(),
            limit: limits.max_improvement_vertices,
        });
    }
    inst.ensure_independent(a)?;
    let talons = inst.d().saturating_sub(1).max(1);
    let mut hit = None;
    let mut current = Vec::new();
    enumerate_independent(inst, 0, talons, &mut current, &mut |x| {
        let is_claw = x.len() == 1
            || (0..inst.n()).any(|c| !x.contains(&c) && x.iter().all(|&t| inst.adjacent(c, t)));
        let x = VertexSet::from(x.to_vec());
        if is_claw && improves(inst, a, &x) {
            hit = Some(x);
            true
        } else {
            false
        }
    });
    Ok(hit)
}

fn check_improvement_limits(
    inst: &ProblemInstance,
    size_bound: usize,
    limits: &OracleLimits,
) -> Result<()> {
    if inst.n() > limits.max_improvement_vertices {
        return Err(Error::LimitExceeded {
            what: "vertex count",
            value: inst.n(),
            limit: limits.max_improvement_vertices,
        });
    }
    if size_bound > limits.max_size_bound {
        return Err(Error::LimitExceeded {
            what: "size bound",
            value: size_bound,
            limit: limits.max_size_bound,
        });
    }
    Ok(())
}

fn improves(inst: &ProblemInstance, a: &VertexSet, x: &VertexSet) -> bool {
    let displaced = inst.neighborhood(x, a).expect("ids are valid");
    inst.weight_sq(x).expect("ids are valid") > inst.weight_sq(&displaced).expect("ids are valid")
}

/// Visits every nonempty independent set of at most `max_len` vertices.
fn enumerate_independent(
    inst: &ProblemInstance,
    next: usize,
    max_len: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if !current.is_empty() && visit(current) {
        return true;
    }
    if current.len() == max_len {
        return false;
    }
    for v in next..inst.n() {
        if current.iter().any(|&c| inst.adjacent(c, v)) {
            continue;
        }
        current.push(v);
        if enumerate_independent(inst, v + 1, max_len, current, visit) {
            return true;
        }
        current.pop();
    }
    false
}

/// `w(A*) / w(A)` against the exact optimum.
pub fn ratio(inst: &ProblemInstance, a: &Solution<'_>) -> Result<Weight> {
    if a.weight().is_zero() {
        return Err(Error::ZeroWeightSolution);
    }
    let opt = exact_mwis(inst)?;
    Ok(opt.weight / a.weight())
}
