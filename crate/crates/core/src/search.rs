//! Local search on the squared weight function.
//!
//! Two neighborhoods are supported: talon sets of claws (SquareImp) and all
//! independent sets of bounded size. A set `X` improves `A` iff
//! `w²(X) > w²(N(X, A))`, and applying it replaces `A` by `A \ N(X, A) ∪ X`.
//!
//! The bounded search only enumerates candidates outside `A` that are
//! connected under the relation "share a neighbor in `A`". A vertex of `A`
//! never changes the gain of a candidate, and the gain is additive over parts
//! with disjoint `A`-neighborhoods, so a minimal improving set always has this
//! shape. The first improvement in (size, lexicographic) order is therefore
//! the same as over all independent sets.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, VertexSet, Weight};
use crate::potential::{Potential, SquaredWeights};

/// The local-improvement size bound `(d−1)² + (d−1)`.
pub fn default_size_bound(d: usize) -> usize {
    let k = d.saturating_sub(1);
    k * k + k
}

/// An independent set bound to its instance, with cached `w` and `w²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution<'a> {
    inst: &'a ProblemInstance,
    set: VertexSet,
    weight: Weight,
    weight_sq: Weight,
}

impl<'a> Solution<'a> {
    pub fn new(inst: &'a ProblemInstance, set: VertexSet) -> Result<Self> {
        inst.ensure_independent(&set)?;
        let weight = inst.weight(&set)?;
        let weight_sq = inst.weight_sq(&set)?;
        Ok(Self {
            inst,
            set,
            weight,
            weight_sq,
        })
    }

    pub fn empty(inst: &'a ProblemInstance) -> Self {
        Self {
            inst,
            set: VertexSet::new(),
            weight: Weight::zero(),
            weight_sq: Weight::zero(),
        }
    }

    pub fn instance(&self) -> &'a ProblemInstance {
        self.inst
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.set
    }

    pub fn into_vertices(self) -> VertexSet {
        self.set
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn weight_sq(&self) -> &Weight {
        &self.weight_sq
    }

    /// True if no vertex outside the set can be added.
    pub fn is_maximal(&self) -> bool {
        (0..self.inst.n()).all(|v| {
            self.set.contains(v) || self.inst.neighbors(v).iter().any(|&u| self.set.contains(u))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImprovementKind {
    /// A single vertex, the talon of a 0-claw.
    ZeroClaw,
    /// Talons of a claw with the given center.
    Claw { center: usize },
    /// Any independent set within the size bound.
    Bounded,
}

/// A candidate set `X` together with `N(X, A)` and its exact gain
/// `w²(X) − w²(N(X, A)) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Improvement {
    x: VertexSet,
    displaced: VertexSet,
    gain: Weight,
    kind: ImprovementKind,
}

impl Improvement {
    /// Checks that `x` is an independent improving set of at most
    /// `(d−1)² + (d−1)` vertices for the independent set `a`.
    pub fn new(
        inst: &ProblemInstance,
        a: &VertexSet,
        x: VertexSet,
        kind: ImprovementKind,
    ) -> Result<Self> {
        let limit = default_size_bound(inst.d()).max(1);
        if x.len() > limit {
            return Err(Error::LimitExceeded {
                what: "improvement size",
                value: x.len(),
                limit,
            });
        }
        let gain = gain(inst, a, &x)?;
        if gain <= Weight::zero() {
            return Err(Error::InvalidParameter(format!(
                "{x} does not improve w²(A): gain {gain}"
            )));
        }
        let displaced = inst.neighborhood(&x, a)?;
        Ok(Self {
            x,
            displaced,
            gain,
            kind,
        })
    }

    pub fn x(&self) -> &VertexSet {
        &self.x
    }

    pub fn displaced(&self) -> &VertexSet {
        &self.displaced
    }

    pub fn gain(&self) -> &Weight {
        &self.gain
    }

    pub fn kind(&self) -> ImprovementKind {
        self.kind
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Only talon sets of claws (SquareImp).
    ClawOnly,
    /// Every independent set up to the size bound.
    #[default]
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// First improvement in canonical order.
    #[default]
    FirstCanonical,
    /// Largest gain, ties broken by canonical order.
    BestGain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// `None` means `(d−1)² + (d−1)`.
    pub size_bound: Option<usize>,
    pub pivot: PivotRule,
    pub max_iterations: Option<u64>,
    /// Worker threads for candidate enumeration. Results do not depend on it.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Bounded,
            size_bound: None,
            pivot: PivotRule::FirstCanonical,
            max_iterations: None,
            threads: 1,
        }
    }
}

impl SearchConfig {
    pub fn claw_only() -> Self {
        Self {
            strategy: Strategy::ClawOnly,
            ..Self::default()
        }
    }

    pub fn bounded() -> Self {
        Self::default()
    }

    pub fn effective_size_bound(&self, d: usize) -> usize {
        self.size_bound.unwrap_or_else(|| default_size_bound(d))
    }

    pub fn validate(&self) -> Result<()> {
        if self.size_bound == Some(0) {
            return Err(Error::InvalidParameter(
                "size bound must be at least 1".into(),
            ));
        }
        if self.threads == 0 {
            return Err(Error::InvalidParameter(
                "thread count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// No improvement of the configured kind exists.
    LocallyOptimal,
    /// Stopped at `max_iterations`.
    IterationCapped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord {
    pub improvement: Improvement,
    pub potential_before: Weight,
    pub potential_after: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<IterationRecord>,
    pub certificate: Certificate,
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn is_locally_optimal(&self) -> bool {
        self.certificate == Certificate::LocallyOptimal
    }
}

/// `w²(X) − w²(N(X, A))`.
pub fn gain(inst: &ProblemInstance, a: &VertexSet, x: &VertexSet) -> Result<Weight> {
    inst.ensure_independent(a)?;
    inst.ensure_independent(x)?;
    let displaced = inst.neighborhood(x, a)?;
    Ok(inst.weight_sq(x)? - inst.weight_sq(&displaced)?)
}

/// Replaces `A` by `A \ N(X, A) ∪ X`.
pub fn apply_improvement<'a>(sol: &Solution<'a>, imp: &Improvement) -> Result<Solution<'a>> {
    let inst = sol.inst;
    inst.ensure_independent(&imp.x)?;
    let displaced = inst.neighborhood(&imp.x, &sol.set)?;
    if displaced != imp.displaced {
        return Err(Error::StaleImprovement);
    }
    let gain = inst.weight_sq(&imp.x)? - inst.weight_sq(&displaced)?;
    if gain != imp.gain {
        return Err(Error::StaleImprovement);
    }
    let set = sol.set.difference(&displaced).union(&imp.x);
    debug_assert!(inst.independence_conflict(&set).is_none());
    let weight = inst.weight(&set)?;
    Ok(Solution {
        inst,
        set,
        weight,
        weight_sq: &sol.weight_sq + gain,
    })
}

/// Repeatedly takes the heaviest remaining vertex (lowest id on ties) and
/// removes its closed neighborhood.
pub fn greedy(inst: &ProblemInstance) -> Solution<'_> {
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by(|&a, &b| inst.weight_of(b).cmp(inst.weight_of(a)).then(a.cmp(&b)));
    let mut blocked = vec![false; inst.n()];
    let mut chosen = Vec::new();
    for v in order {
        if blocked[v] {
            continue;
        }
        chosen.push(v);
        blocked[v] = true;
        for &u in inst.neighbors(v) {
            blocked[u] = true;
        }
    }
    Solution::new(inst, chosen.into_iter().collect()).expect("greedy selection is independent")
}

/// Finds a claw (including 0-claws) whose talons improve `w²(A)`.
///
/// Canonical order: 0-claws by id, then centers by id, then talon sets by
/// size and lexicographically. Talons are taken outside `A` and number at
/// most `d − 1`.
pub fn find_claw_improvement(
    inst: &ProblemInstance,
    a: &VertexSet,
    pivot: PivotRule,
) -> Option<Improvement> {
    Searcher::new(inst).find_claw(a, pivot)
}

/// Finds an independent improving set of at most `size_bound` vertices.
///
/// The search is complete: `None` means no such set exists.
pub fn find_bounded_improvement(
    inst: &ProblemInstance,
    a: &VertexSet,
    size_bound: usize,
    pivot: PivotRule,
) -> Option<Improvement> {
    Searcher::new(inst).find_bounded(a, size_bound, pivot, false)
}

/// Runs the local improvement loop from `warm_start` (empty by default).
pub fn run_local_search<'a>(
    inst: &'a ProblemInstance,
    cfg: &SearchConfig,
    warm_start: Option<&VertexSet>,
) -> Result<(Solution<'a>, Trace)> {
    cfg.validate()?;
    let start = match warm_start {
        Some(set) => Solution::new(inst, set.clone())?,
        None => Solution::empty(inst),
    };
    if cfg.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker threads: {e}")))?;
        pool.install(|| search_loop(start, cfg, true))
    } else {
        search_loop(start, cfg, false)
    }
}

fn search_loop<'a>(
    start: Solution<'a>,
    cfg: &SearchConfig,
    parallel: bool,
) -> Result<(Solution<'a>, Trace)> {
    let inst = start.inst;
    let searcher = Searcher::new(inst);
    let bound = cfg.effective_size_bound(inst.d());
    let mut sol = start;
    let mut records = Vec::new();
    loop {
        if cfg
            .max_iterations
            .is_some_and(|max| records.len() as u64 >= max)
        {
            return Ok((
                sol,
                Trace {
                    records,
                    certificate: Certificate::IterationCapped,
                },
            ));
        }
        let found = match cfg.strategy {
            Strategy::ClawOnly => searcher.find_claw(&sol.set, cfg.pivot),
            Strategy::Bounded => searcher.find_bounded(&sol.set, bound, cfg.pivot, parallel),
        };
        let Some(imp) = found else {
            return Ok((
                sol,
                Trace {
                    records,
                    certificate: Certificate::LocallyOptimal,
                },
            ));
        };
        let next = apply_improvement(&sol, &imp)?;
        records.push(IterationRecord {
            potential_before: sol.weight_sq.clone(),
            potential_after: next.weight_sq.clone(),
            improvement: imp,
        });
        sol = next;
    }
}

/// Precomputed squared weights for repeated searches on one instance.
struct Searcher<'s> {
    inst: &'s ProblemInstance,
    squares: SquaredWeights,
}

impl<'s> Searcher<'s> {
    fn new(inst: &'s ProblemInstance) -> Self {
        Self {
            inst,
            squares: SquaredWeights::new(inst),
        }
    }

    fn find_claw(&self, a: &VertexSet, pivot: PivotRule) -> Option<Improvement> {
        let found = match &self.squares {
            SquaredWeights::Small(sq) => claw_search(self.inst, sq, a, pivot),
            SquaredWeights::Large(sq) => claw_search(self.inst, sq, a, pivot),
        };
        found.map(|(x, kind)| self.finish(a, x, kind))
    }

    fn find_bounded(
        &self,
        a: &VertexSet,
        bound: usize,
        pivot: PivotRule,
        parallel: bool,
    ) -> Option<Improvement> {
        let found = match &self.squares {
            SquaredWeights::Small(sq) => {
                BoundedSearch::new(self.inst, sq, a, bound, pivot).run(parallel)
            }
            SquaredWeights::Large(sq) => {
                BoundedSearch::new(self.inst, sq, a, bound, pivot).run(parallel)
            }
        };
        found.map(|x| self.finish(a, x, ImprovementKind::Bounded))
    }

    fn finish(&self, a: &VertexSet, x: Vec<usize>, kind: ImprovementKind) -> Improvement {
        let x = VertexSet::from_sorted(x);
        let displaced = self.inst.neighborhood(&x, a).expect("ids are valid");
        let gain = self.inst.weight_sq(&x).expect("ids are valid")
            - self.inst.weight_sq(&displaced).expect("ids are valid");
        debug_assert!(gain > Weight::zero());
        Improvement {
            x,
            displaced,
            gain,
            kind,
        }
    }
}

/// For every vertex outside `a`, its neighbors inside `a`.
fn neighbors_in(inst: &ProblemInstance, in_a: &[bool]) -> Vec<Vec<usize>> {
    (0..inst.n())
        .map(|v| {
            if in_a[v] {
                Vec::new()
            } else {
                inst.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| in_a[u])
                    .collect()
            }
        })
        .collect()
}

fn membership(n: usize, a: &VertexSet) -> Vec<bool> {
    let mut in_a = vec![false; n];
    for v in a.iter() {
        in_a[v] = true;
    }
    in_a
}

fn claw_search<P: Potential>(
    inst: &ProblemInstance,
    sq: &[P],
    a: &VertexSet,
    pivot: PivotRule,
) -> Option<(Vec<usize>, ImprovementKind)> {
    let n = inst.n();
    let in_a = membership(n, a);
    let a_nbrs = neighbors_in(inst, &in_a);
    let mut best: Option<(P, Vec<usize>, ImprovementKind)> = None;
    let mut consider = |gain: P, talons: &[usize], kind: ImprovementKind| -> bool {
        if !gain.is_positive() {
            return false;
        }
        match pivot {
            PivotRule::FirstCanonical => {
                best = Some((gain, talons.to_vec(), kind));
                true
            }
            PivotRule::BestGain => {
                if best.as_ref().is_none_or(|(g, _, _)| gain > *g) {
                    best = Some((gain, talons.to_vec(), kind));
                }
                false
            }
        }
    };

    for v in (0..n).filter(|&v| !in_a[v]) {
        let mut gain = sq[v].clone();
        for &u in &a_nbrs[v] {
            gain.sub_ref(&sq[u]);
        }
        if consider(gain, &[v], ImprovementKind::ZeroClaw) {
            return best.map(|(_, x, k)| (x, k));
        }
    }

    let max_talons = inst.d().saturating_sub(1);
    let mut stamp = vec![0usize; n];
    let mut epoch = 0usize;
    for center in 0..n {
        let pool: Vec<usize> = inst
            .neighbors(center)
            .iter()
            .copied()
            .filter(|&u| !in_a[u])
            .collect();
        for size in 2..=max_talons.min(pool.len()) {
            let mut chosen = Vec::with_capacity(size);
            let stop =
                for_each_independent_subset(inst, &pool, 0, size, &mut chosen, &mut |talons| {
                    epoch += 1;
                    let mut gain = P::zero();
                    for &t in talons {
                        gain.add_ref(&sq[t]);
                        for &u in &a_nbrs[t] {
                            if stamp[u] != epoch {
                                stamp[u] = epoch;
                                gain.sub_ref(&sq[u]);
                            }
                        }
                    }
                    consider(gain, talons, ImprovementKind::Claw { center })
                });
            if stop {
                return best.map(|(_, x, k)| (x, k));
            }
        }
    }
    best.map(|(_, x, k)| (x, k))
}

/// Visits the independent `size`-subsets of `pool` in lexicographic order;
/// stops early when `visit` returns true.
fn for_each_independent_subset(
    inst: &ProblemInstance,
    pool: &[usize],
    start: usize,
    size: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == size {
        return visit(chosen);
    }
    let missing = size - chosen.len();
    for i in start..pool.len() {
        if pool.len() - i < missing {
            break;
        }
        let v = pool[i];
        if chosen.iter().any(|&c| inst.adjacent(c, v)) {
            continue;
        }
        chosen.push(v);
        if for_each_independent_subset(inst, pool, i + 1, size, chosen, visit) {
            return true;
        }
        chosen.pop();
    }
    false
}

struct Found<P> {
    members: Vec<usize>,
    gain: P,
}

impl<P: Potential> Found<P> {
    fn canonical_before(&self, other: &Self) -> bool {
        (self.members.len(), &self.members) < (other.members.len(), &other.members)
    }

    fn beats(&self, other: &Self, pivot: PivotRule) -> bool {
        match pivot {
            PivotRule::FirstCanonical => self.canonical_before(other),
            PivotRule::BestGain => {
                self.gain > other.gain || (self.gain == other.gain && self.canonical_before(other))
            }
        }
    }
}

struct BoundedSearch<'s, P> {
    inst: &'s ProblemInstance,
    sq: &'s [P],
    a_nbrs: Vec<Vec<usize>>,
    /// Candidates sharing an `A`-neighbor and not adjacent to each other.
    linked: Vec<Vec<usize>>,
    candidates: Vec<usize>,
    /// `suffix_max[i]`: largest squared weight among `candidates[i..]`.
    suffix_max: Vec<P>,
    bound: usize,
    pivot: PivotRule,
    shortest: AtomicUsize,
}

struct Walk<P> {
    members: Vec<usize>,
    hits: Vec<u32>,
    blocked: Vec<u32>,
    reach: Vec<u32>,
    x_sq: P,
    n_sq: P,
}

impl<'s, P: Potential> BoundedSearch<'s, P> {
    fn new(
        inst: &'s ProblemInstance,
        sq: &'s [P],
        a: &VertexSet,
        bound: usize,
        pivot: PivotRule,
    ) -> Self {
        let n = inst.n();
        let in_a = membership(n, a);
        let a_nbrs = neighbors_in(inst, &in_a);
        let candidates: Vec<usize> = (0..n).filter(|&v| !in_a[v]).collect();

        let mut linked = vec![Vec::new(); n];
        let mut stamp = vec![usize::MAX; n];
        for &x in &candidates {
            for &hub in &a_nbrs[x] {
                for &y in inst.neighbors(hub) {
                    if y != x && !in_a[y] && stamp[y] != x && !inst.adjacent(x, y) {
                        stamp[y] = x;
                        linked[x].push(y);
                    }
                }
            }
            linked[x].sort_unstable();
        }

        let mut suffix_max = vec![P::zero(); candidates.len() + 1];
        for i in (0..candidates.len()).rev() {
            let here = &sq[candidates[i]];
            suffix_max[i] = if *here > suffix_max[i + 1] {
                here.clone()
            } else {
                suffix_max[i + 1].clone()
            };
        }

        Self {
            inst,
            sq,
            a_nbrs,
            linked,
            candidates,
            suffix_max,
            bound,
            pivot,
            shortest: AtomicUsize::new(usize::MAX),
        }
    }

    fn run(&self, parallel: bool) -> Option<Vec<usize>> {
        if self.bound == 0 {
            return None;
        }
        let roots = 0..self.candidates.len();
        let best = if parallel {
            roots
                .into_par_iter()
                .filter_map(|i| {
                    let mut best = None;
                    self.search_root(i, &mut best);
                    best
                })
                .reduce_with(|a, b| if b.beats(&a, self.pivot) { b } else { a })
        } else {
            let mut best: Option<Found<P>> = None;
            for i in roots {
                self.search_root(i, &mut best);
                if self.pivot == PivotRule::FirstCanonical
                    && best.as_ref().is_some_and(|b| b.members.len() == 1)
                {
                    break;
                }
            }
            best
        };
        best.map(|b| b.members)
    }

    fn search_root(&self, index: usize, best: &mut Option<Found<P>>) {
        let root = self.candidates[index];
        let n = self.inst.n();
        let mut walk = Walk {
            members: Vec::with_capacity(self.bound),
            hits: vec![0; n],
            blocked: vec![0; n],
            reach: vec![0; n],
            x_sq: P::zero(),
            n_sq: P::zero(),
        };
        self.push(&mut walk, root);
        let ext: Vec<usize> = self.linked[root]
            .iter()
            .copied()
            .filter(|&u| u > root)
            .collect();
        self.extend(&mut walk, ext, root, &self.suffix_max[index], best);
    }

    fn push(&self, walk: &mut Walk<P>, v: usize) {
        walk.members.push(v);
        walk.x_sq.add_ref(&self.sq[v]);
        for &a in &self.a_nbrs[v] {
            if walk.hits[a] == 0 {
                walk.n_sq.add_ref(&self.sq[a]);
            }
            walk.hits[a] += 1;
        }
        for &u in self.inst.neighbors(v) {
            walk.blocked[u] += 1;
        }
        walk.reach[v] += 1;
        for &u in &self.linked[v] {
            walk.reach[u] += 1;
        }
    }

    fn pop(&self, walk: &mut Walk<P>) {
        let v = walk.members.pop().expect("walk is nonempty");
        walk.x_sq.sub_ref(&self.sq[v]);
        for &a in &self.a_nbrs[v] {
            walk.hits[a] -= 1;
            if walk.hits[a] == 0 {
                walk.n_sq.sub_ref(&self.sq[a]);
            }
        }
        for &u in self.inst.neighbors(v) {
            walk.blocked[u] -= 1;
        }
        walk.reach[v] -= 1;
        for &u in &self.linked[v] {
            walk.reach[u] -= 1;
        }
    }

    /// Enumeration of connected sets rooted at their smallest member, each
    /// visited exactly once (Wernicke's ESU scheme).
    fn extend(
        &self,
        walk: &mut Walk<P>,
        mut ext: Vec<usize>,
        root: usize,
        max_sq: &P,
        best: &mut Option<Found<P>>,
    ) {
        let mut gain = walk.x_sq.clone();
        gain.sub_ref(&walk.n_sq);
        if gain.is_positive() {
            let mut members = walk.members.clone();
            members.sort_unstable();
            let found = Found { members, gain };
            if best.as_ref().is_none_or(|b| found.beats(b, self.pivot)) {
                if self.pivot == PivotRule::FirstCanonical {
                    self.shortest
                        .fetch_min(found.members.len(), Ordering::Relaxed);
                }
                *best = Some(found);
            }
        }

        let len = walk.members.len();
        let cap = match self.pivot {
            PivotRule::FirstCanonical => self.bound.min(self.shortest.load(Ordering::Relaxed)),
            PivotRule::BestGain => self.bound,
        };
        if len >= cap {
            return;
        }
        // no superset in this subtree can gain more than this
        let mut optimistic = walk.x_sq.clone();
        optimistic.add_ref(&max_sq.times(cap - len));
        optimistic.sub_ref(&walk.n_sq);
        if !optimistic.is_positive() {
            return;
        }
        if self.pivot == PivotRule::BestGain && best.as_ref().is_some_and(|b| optimistic < b.gain) {
            return;
        }

        while let Some(w) = ext.pop() {
            if walk.blocked[w] > 0 {
                continue;
            }
            let mut next = ext.clone();
            next.extend(
                self.linked[w]
                    .iter()
                    .copied()
                    .filter(|&u| u > root && walk.reach[u] == 0),
            );
            self.push(walk, w);
            self.extend(walk, next, root, max_sq, best);
            self.pop(walk);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::berman_tight;
    use num_traits::One;

    fn int(v: i64) -> Weight {
        Weight::from_integer(v.into())
    }

    fn path_232() -> ProblemInstance {
        ProblemInstance::new(vec![int(2), int(3), int(2)], &[(0, 1), (1, 2)], 3).unwrap()
    }

    #[test]
    fn figure_two_improvement_has_gain_one() {
        let tight = berman_tight(6, Weight::one()).unwrap();
        // {1} = 5, {3} = 7, {1,3} = 11
        let x = VertexSet::from([5, 7, 11]);
        assert_eq!(gain(&tight.instance, &tight.a_side, &x).unwrap(), int(1));
        assert_eq!(
            gain(&tight.instance, &tight.a_side, &VertexSet::new()).unwrap(),
            int(0)
        );
        assert_eq!(
            gain(&tight.instance, &tight.a_side, &tight.a_side).unwrap(),
            int(0)
        );
    }

    #[test]
    fn gain_requires_independent_candidate() {
        let inst = path_232();
        let err = gain(&inst, &VertexSet::new(), &VertexSet::from([0, 1])).unwrap_err();
        assert_eq!(err, Error::NotIndependent(0, 1));
    }

    #[test]
    fn applying_figure_two_improvement() {
        let tight = berman_tight(6, Weight::one()).unwrap();
        let sol = Solution::new(&tight.instance, tight.a_side.clone()).unwrap();
        let imp = Improvement::new(
            &tight.instance,
            &tight.a_side,
            VertexSet::from([5, 7, 11]),
            ImprovementKind::Bounded,
        )
        .unwrap();
        assert_eq!(imp.displaced(), &VertexSet::from([0, 2]));
        let next = apply_improvement(&sol, &imp).unwrap();
        assert_eq!(next.vertices(), &VertexSet::from([1, 3, 4, 5, 7, 11]));
        assert_eq!(sol.weight_sq(), &int(5));
        assert_eq!(next.weight_sq(), &int(6));
    }

    #[test]
    fn stale_improvement_is_rejected() {
        let tight = berman_tight(6, Weight::one()).unwrap();
        let imp = Improvement::new(
            &tight.instance,
            &tight.a_side,
            VertexSet::from([5, 7, 11]),
            ImprovementKind::Bounded,
        )
        .unwrap();
        let other = Solution::new(&tight.instance, VertexSet::from([0])).unwrap();
        assert_eq!(
            apply_improvement(&other, &imp),
            Err(Error::StaleImprovement)
        );
    }

    #[test]
    fn first_claw_from_empty_is_a_singleton() {
        let inst = path_232();
        let imp =
            find_claw_improvement(&inst, &VertexSet::new(), PivotRule::FirstCanonical).unwrap();
        assert_eq!(imp.x(), &VertexSet::singleton(0));
        assert_eq!(imp.gain(), &int(4));
        assert_eq!(imp.kind(), ImprovementKind::ZeroClaw);
    }

    #[test]
    fn path_with_heavy_middle_has_no_improving_claw() {
        let inst = path_232();
        let a = VertexSet::singleton(1);
        assert!(find_claw_improvement(&inst, &a, PivotRule::FirstCanonical).is_none());
        // the two ends weigh 2² + 2² = 8 against 3² = 9
        assert!(find_bounded_improvement(&inst, &a, 2, PivotRule::FirstCanonical).is_none());
    }

    #[test]
    fn tight_a_side_blocks_claws_but_not_bounded_sets() {
        let tight = berman_tight(6, Weight::one()).unwrap();
        assert!(
            find_claw_improvement(&tight.instance, &tight.a_side, PivotRule::FirstCanonical)
                .is_none()
        );
        let imp = find_bounded_improvement(
            &tight.instance,
            &tight.a_side,
            30,
            PivotRule::FirstCanonical,
        )
        .unwrap();
        assert_eq!(imp.x().len(), 3);
        assert!(imp.gain() > &Weight::zero());
    }

    #[test]
    fn tight_optimum_is_locally_optimal() {
        let tight = berman_tight(4, Weight::one()).unwrap();
        assert!(find_bounded_improvement(
            &tight.instance,
            &tight.b_side,
            12,
            PivotRule::FirstCanonical
        )
        .is_none());
        assert!(
            find_bounded_improvement(&tight.instance, &tight.b_side, 12, PivotRule::BestGain)
                .is_none()
        );
    }

    #[test]
    fn greedy_examples() {
        let inst = path_232();
        assert_eq!(greedy(&inst).vertices(), &VertexSet::singleton(1));
        let free = ProblemInstance::new(vec![int(5), int(7)], &[], 2).unwrap();
        let sol = greedy(&free);
        assert_eq!(sol.weight(), &int(12));
        assert!(sol.is_maximal());
    }

    #[test]
    fn tight_claw_only_from_a_side_makes_no_moves() {
        let tight = berman_tight(4, Weight::one()).unwrap();
        let (sol, trace) = run_local_search(
            &tight.instance,
            &SearchConfig::claw_only(),
            Some(&tight.a_side),
        )
        .unwrap();
        assert_eq!(trace.iterations(), 0);
        assert!(trace.is_locally_optimal());
        assert_eq!(sol.weight(), &int(3));
    }

    #[test]
    fn tight_bounded_from_a_side_reaches_optimum() {
        let tight = berman_tight(4, Weight::one()).unwrap();
        let (sol, trace) = run_local_search(
            &tight.instance,
            &SearchConfig::bounded(),
            Some(&tight.a_side),
        )
        .unwrap();
        assert!(trace.iterations() > 0);
        assert_eq!(sol.weight(), &int(6));
    }

    #[test]
    fn potential_increases_and_telescopes() {
        let tight = berman_tight(5, Weight::one()).unwrap();
        let (sol, trace) =
            run_local_search(&tight.instance, &SearchConfig::bounded(), None).unwrap();
        let mut total = Weight::zero();
        for rec in &trace.records {
            assert!(rec.potential_after > rec.potential_before);
            assert_eq!(
                &rec.potential_after - &rec.potential_before,
                rec.improvement.gain().clone()
            );
            total += rec.improvement.gain();
        }
        assert_eq!(&total, sol.weight_sq());
        assert!(sol.is_maximal());
    }

    #[test]
    fn disjoint_cliques_solved_exactly() {
        let weights = vec![int(1), int(4), int(2), int(3), int(3)];
        let inst = ProblemInstance::new(weights, &[(0, 1), (0, 2), (1, 2), (3, 4)], 2).unwrap();
        let (sol, _) = run_local_search(&inst, &SearchConfig::bounded(), None).unwrap();
        assert_eq!(sol.vertices(), &VertexSet::from([1, 3]));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let tight = berman_tight(4, Weight::one()).unwrap();
        let cfg = SearchConfig {
            max_iterations: Some(1),
            ..SearchConfig::bounded()
        };
        let (_, trace) = run_local_search(&tight.instance, &cfg, None).unwrap();
        assert_eq!(trace.iterations(), 1);
        assert_eq!(trace.certificate, Certificate::IterationCapped);
    }

    #[test]
    fn warm_start_must_be_independent() {
        let inst = path_232();
        let err = run_local_search(
            &inst,
            &SearchConfig::bounded(),
            Some(&VertexSet::from([0, 1])),
        )
        .unwrap_err();
        assert_eq!(err, Error::NotIndependent(0, 1));
    }

    #[test]
    fn zero_size_bound_is_rejected() {
        let inst = path_232();
        let cfg = SearchConfig {
            size_bound: Some(0),
            ..SearchConfig::bounded()
        };
        assert!(run_local_search(&inst, &cfg, None).is_err());
    }

    #[test]
    fn thread_count_does_not_change_the_run() {
        let tight = berman_tight(5, Weight::one()).unwrap();
        for pivot in [PivotRule::FirstCanonical, PivotRule::BestGain] {
            let base = SearchConfig {
                pivot,
                ..SearchConfig::bounded()
            };
            let (s1, t1) = run_local_search(&tight.instance, &base, None).unwrap();
            let four = SearchConfig { threads: 4, ..base };
            let (s4, t4) = run_local_search(&tight.instance, &four, None).unwrap();
            assert_eq!(s1.vertices(), s4.vertices());
            assert_eq!(t1, t4);
        }
    }

    #[test]
    fn large_weights_use_the_wide_path() {
        let huge = Weight::from_integer(num_bigint::BigInt::from(10u8).pow(40));
        let inst = ProblemInstance::new(
            vec![huge.clone(), huge.clone() + int(1), huge],
            &[(0, 1), (1, 2)],
            3,
        )
        .unwrap();
        assert!(matches!(
            SquaredWeights::new(&inst),
            SquaredWeights::Large(_)
        ));
        let (sol, _) = run_local_search(&inst, &SearchConfig::bounded(), None).unwrap();
        assert_eq!(sol.vertices(), &VertexSet::from([0, 2]));
    }
}
