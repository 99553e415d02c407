//! Weighted graphs, vertex sets, neighborhoods and claw detection.
//!
//! Vertices are dense ids `0..n`. Every canonical ordering in the crate is by
//! ascending id, and all weights are exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact vertex weight.
pub type Weight = BigRational;

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        Self(vec![v])
    }

    /// Builds a set from ids that are already sorted and unique.
    pub(crate) fn from_sorted(ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        Self(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut ids: Vec<usize> = iter.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(ids: Vec<usize>) -> Self {
        ids.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(ids: [usize; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An induced claw: a center adjacent to every talon, talons pairwise
/// non-adjacent. A 0-claw has no center and exactly one talon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claw {
    center: Option<usize>,
    talons: VertexSet,
}

impl Claw {
    pub fn new(inst: &ProblemInstance, center: Option<usize>, talons: VertexSet) -> Result<Self> {
        inst.validate_set(&talons)?;
        match center {
            None => {
                if talons.len() != 1 {
                    return Err(Error::InvalidClaw(format!(
                        "a 0-claw has exactly one vertex, got {}",
                        talons.len()
                    )));
                }
            }
            Some(c) => {
                inst.validate_vertex(c)?;
                if talons.is_empty() {
                    return Err(Error::InvalidClaw(
                        "a claw with a center needs talons".into(),
                    ));
                }
                if talons.contains(c) {
                    return Err(Error::InvalidClaw(format!("center {c} is also a talon")));
                }
                if let Some(t) = talons.iter().find(|&t| !inst.adjacent(c, t)) {
                    return Err(Error::InvalidClaw(format!(
                        "talon {t} is not adjacent to center {c}"
                    )));
                }
                if let Some((a, b)) = inst.independence_conflict(&talons) {
                    return Err(Error::InvalidClaw(format!(
                        "talons {a} and {b} are adjacent"
                    )));
                }
            }
        }
        Ok(Self { center, talons })
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    pub fn talons(&self) -> &VertexSet {
        &self.talons
    }

    /// Number of talons; a 0-claw reports 0.
    pub fn order(&self) -> usize {
        if self.center.is_some() {
            self.talons.len()
        } else {
            0
        }
    }
}

/// Outcome of a claw-freeness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClawFreeness {
    Free,
    Witness(Claw),
}

impl ClawFreeness {
    pub fn is_free(&self) -> bool {
        matches!(self, ClawFreeness::Free)
    }

    pub fn witness(&self) -> Option<&Claw> {
        match self {
            ClawFreeness::Free => None,
            ClawFreeness::Witness(c) => Some(c),
        }
    }
}

/// An undirected graph with positive rational vertex weights and a claw
/// parameter `d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    weights: Vec<Weight>,
    neighbors: Vec<Vec<usize>>,
    rows: Vec<Vec<u64>>,
    edge_count: usize,
    d: usize,
}

impl ProblemInstance {
    /// Builds an instance, rejecting non-positive weights, self-loops,
    /// duplicate edges, dangling endpoints and `d < 2`.
    pub fn new(weights: Vec<Weight>, edges: &[(usize, usize)], d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidClawParameter { d, min: 2 });
        }
        for (vertex, weight) in weights.iter().enumerate() {
            if !weight.is_positive() {
                return Err(Error::NonPositiveWeight {
                    vertex,
                    weight: weight.clone(),
                });
            }
        }
        let n = weights.len();
        let words = n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; n];
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if rows[u][v / 64] >> (v % 64) & 1 == 1 {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            rows[u][v / 64] |= 1 << (v % 64);
            rows[v][u / 64] |= 1 << (u % 64);
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Self {
            weights,
            neighbors,
            rows,
            edge_count: edges.len(),
            d,
        })
    }

    /// Same graph with unit weights.
    pub fn unweighted(n: usize, edges: &[(usize, usize)], d: usize) -> Result<Self> {
        Self::new(vec![Weight::one(); n], edges, d)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Returns a copy carrying a different claw parameter.
    pub fn with_d(&self, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidClawParameter { d, min: 2 });
        }
        Ok(Self { d, ..self.clone() })
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn weight_of(&self, v: usize) -> &Weight {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Open neighborhood of `v`, sorted ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet((0..self.n()).collect())
    }

    pub fn validate_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub fn validate_set(&self, s: &VertexSet) -> Result<()> {
        // sorted, so the last id is the largest
        match s.as_slice().last() {
            Some(&v) => self.validate_vertex(v),
            None => Ok(()),
        }
    }

    /// `N(U, W) = { w in W : some u in U is adjacent to w or equal to it }`.
    pub fn neighborhood(&self, u: &VertexSet, w: &VertexSet) -> Result<VertexSet> {
        self.validate_set(u)?;
        self.validate_set(w)?;
        Ok(VertexSet(
            w.iter()
                .filter(|&x| u.contains(x) || self.neighbors[x].iter().any(|&y| u.contains(y)))
                .collect(),
        ))
    }

    /// Returns the first adjacent pair inside `s`, if any.
    pub fn independence_conflict(&self, s: &VertexSet) -> Option<(usize, usize)> {
        let ids = s.as_slice();
        for (i, &a) in ids.iter().enumerate() {
            if let Some(&b) = ids[i + 1..].iter().find(|&&b| self.adjacent(a, b)) {
                return Some((a, b));
            }
        }
        None
    }

    pub fn is_independent(&self, s: &VertexSet) -> Result<bool> {
        self.validate_set(s)?;
        Ok(self.independence_conflict(s).is_none())
    }

    /// Fails with [`Error::NotIndependent`] on the first adjacent pair.
    pub fn ensure_independent(&self, s: &VertexSet) -> Result<()> {
        self.validate_set(s)?;
        match self.independence_conflict(s) {
            Some((a, b)) => Err(Error::NotIndependent(a, b)),
            None => Ok(()),
        }
    }

    pub fn weight(&self, s: &VertexSet) -> Result<Weight> {
        self.validate_set(s)?;
        Ok(s.iter()
            .fold(Weight::zero(), |acc, v| acc + &self.weights[v]))
    }

    /// `w²(S) = Σ w(v)²`, which is not `(w(S))²` in general.
    pub fn weight_sq(&self, s: &VertexSet) -> Result<Weight> {
        self.validate_set(s)?;
        Ok(s.iter().fold(Weight::zero(), |acc, v| {
            let w = &self.weights[v];
            acc + w * w
        }))
    }

    /// Searches every center for `d` pairwise non-adjacent neighbors.
    ///
    /// For `d = 0` any vertex is a witness; for `d = 1` any edge is. The first
    /// witness in (center, lexicographic talons) order is returned.
    pub fn is_d_claw_free(&self, d: usize) -> ClawFreeness {
        if d == 0 {
            return match self.n() {
                0 => ClawFreeness::Free,
                _ => ClawFreeness::Witness(Claw {
                    center: None,
                    talons: VertexSet::singleton(0),
                }),
            };
        }
        for c in 0..self.n() {
            let nbrs = &self.neighbors[c];
            if nbrs.len() < d {
                continue;
            }
            let mut chosen = Vec::with_capacity(d);
            if self.independent_extension(nbrs, 0, d, &mut chosen) {
                return ClawFreeness::Witness(Claw {
                    center: Some(c),
                    talons: VertexSet(chosen),
                });
            }
        }
        ClawFreeness::Free
    }

    fn independent_extension(
        &self,
        pool: &[usize],
        start: usize,
        want: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == want {
            return true;
        }
        let missing = want - chosen.len();
        for i in start..pool.len() {
            if pool.len() - i < missing {
                break;
            }
            let v = pool[i];
            if chosen.iter().any(|&c| self.adjacent(c, v)) {
                continue;
            }
            chosen.push(v);
            if self.independent_extension(pool, i + 1, want, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Integer numerators of all weights over their least common denominator.
    pub(crate) fn integer_weights(&self) -> (Vec<BigInt>, BigInt) {
        let denom = self
            .weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let numers = self
            .weights
            .iter()
            .map(|w| w.numer() * (&denom / w.denom()))
            .collect();
        (numers, denom)
    }
}

/// Parses `p` or `p/q` into an exact rational.
pub fn parse_weight(text: &str) -> Option<Weight> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().ok()?;
    let den: BigInt = den.trim().parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Weight::new(num, den))
}

/// Renders a weight as `p` or `p/q` in lowest terms.
pub fn format_weight(w: &Weight) -> String {
    if w.denom().is_one() {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::berman_tight;

    fn r(n: i64, d: i64) -> Weight {
        Weight::new(n.into(), d.into())
    }

    fn star(leaves: usize) -> ProblemInstance {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        ProblemInstance::unweighted(leaves + 1, &edges, 2).unwrap()
    }

    #[test]
    fn neighborhood_includes_members_of_both_sets() {
        let inst = ProblemInstance::unweighted(1, &[], 2).unwrap();
        let v = VertexSet::singleton(0);
        assert_eq!(inst.neighborhood(&v, &v).unwrap(), v);
    }

    #[test]
    fn neighborhood_of_empty_set_is_empty() {
        let inst = star(3);
        let empty = VertexSet::new();
        assert!(inst
            .neighborhood(&empty, &inst.vertices())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn neighborhood_in_tight_instance() {
        let tight = berman_tight(4, Weight::one()).unwrap();
        // vertex 6 is the pair {1, 2}
        let u = VertexSet::singleton(6);
        let n = tight.instance.neighborhood(&u, &tight.a_side).unwrap();
        assert_eq!(n, VertexSet::from([0, 1]));
    }

    #[test]
    fn neighborhood_rejects_bad_ids() {
        let inst = star(2);
        let err = inst
            .neighborhood(&VertexSet::singleton(9), &inst.vertices())
            .unwrap_err();
        assert_eq!(err, Error::InvalidVertex { vertex: 9, n: 3 });
    }

    #[test]
    fn independence() {
        let inst = ProblemInstance::unweighted(2, &[(0, 1)], 2).unwrap();
        assert!(inst.is_independent(&VertexSet::new()).unwrap());
        assert!(!inst.is_independent(&VertexSet::from([0, 1])).unwrap());
        assert!(inst.is_independent(&VertexSet::from([4])).is_err());

        let tight = berman_tight(4, Weight::one()).unwrap();
        assert_eq!(tight.b_side.len(), 6);
        assert!(tight.instance.is_independent(&tight.b_side).unwrap());
    }

    #[test]
    fn squared_weights() {
        let inst = ProblemInstance::new(vec![r(1, 2), r(1, 3), r(1, 1)], &[], 2).unwrap();
        assert_eq!(inst.weight_sq(&VertexSet::new()).unwrap(), r(0, 1));
        assert_eq!(inst.weight_sq(&VertexSet::from([0, 1])).unwrap(), r(13, 36));
        let unit = ProblemInstance::unweighted(3, &[], 2).unwrap();
        assert_eq!(unit.weight_sq(&unit.vertices()).unwrap(), r(3, 1));
    }

    #[test]
    fn star_claw_detection() {
        let inst = star(3);
        let claw = inst.is_d_claw_free(3);
        let w = claw.witness().expect("star is a 3-claw");
        assert_eq!(w.center(), Some(0));
        assert_eq!(w.talons(), &VertexSet::from([1, 2, 3]));
        assert!(inst.is_d_claw_free(4).is_free());
    }

    #[test]
    fn one_claw_is_any_edge() {
        let inst = ProblemInstance::unweighted(3, &[(1, 2)], 2).unwrap();
        let w = inst.is_d_claw_free(1);
        assert_eq!(w.witness().unwrap().center(), Some(1));
        assert!(ProblemInstance::unweighted(3, &[], 2)
            .unwrap()
            .is_d_claw_free(1)
            .is_free());
    }

    #[test]
    fn tight_instance_is_claw_free_with_maximal_claws_at_a_side() {
        let tight = berman_tight(6, Weight::one()).unwrap();
        assert!(tight.instance.is_d_claw_free(6).is_free());
        for a in tight.a_side.iter() {
            let nbrs = VertexSet::from(tight.instance.neighbors(a).to_vec());
            let mut chosen = Vec::new();
            assert!(tight
                .instance
                .independent_extension(nbrs.as_slice(), 0, 5, &mut chosen));
        }
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            ProblemInstance::new(vec![r(0, 1)], &[], 2),
            Err(Error::NonPositiveWeight { vertex: 0, .. })
        ));
        assert_eq!(
            ProblemInstance::unweighted(2, &[(1, 1)], 2),
            Err(Error::SelfLoop(1))
        );
        assert_eq!(
            ProblemInstance::unweighted(2, &[(0, 1), (1, 0)], 2),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            ProblemInstance::unweighted(2, &[(0, 5)], 2),
            Err(Error::InvalidVertex { vertex: 5, n: 2 })
        );
        assert_eq!(
            ProblemInstance::unweighted(2, &[], 1),
            Err(Error::InvalidClawParameter { d: 1, min: 2 })
        );
    }

    #[test]
    fn claw_invariants() {
        let inst = star(3);
        assert!(Claw::new(&inst, Some(0), VertexSet::from([1, 2])).is_ok());
        assert!(Claw::new(&inst, None, VertexSet::from([1])).is_ok());
        assert!(Claw::new(&inst, None, VertexSet::from([1, 2])).is_err());
        assert!(Claw::new(&inst, Some(1), VertexSet::from([2])).is_err());
        assert!(Claw::new(&inst, Some(0), VertexSet::from([0, 1])).is_err());
        assert!(Claw::new(&inst, Some(0), VertexSet::new()).is_err());
    }

    #[test]
    fn weight_text_round_trip() {
        assert_eq!(parse_weight("1/3"), Some(r(1, 3)));
        assert_eq!(parse_weight("4/2"), Some(r(2, 1)));
        assert_eq!(parse_weight("1/0"), None);
        assert_eq!(parse_weight("x"), None);
        assert_eq!(format_weight(&r(6, 4)), "3/2");
        assert_eq!(format_weight(&r(7, 1)), "7");
    }

    #[test]
    fn integer_weights_share_denominator() {
        let inst = ProblemInstance::new(vec![r(1, 2), r(2, 3), r(5, 1)], &[], 2).unwrap();
        let (numers, denom) = inst.integer_weights();
        assert_eq!(denom, BigInt::from(6));
        assert_eq!(
            numers,
            vec![BigInt::from(3), BigInt::from(4), BigInt::from(30)]
        );
    }
}
