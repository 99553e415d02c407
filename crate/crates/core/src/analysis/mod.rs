//! Charges, contributions and the near-tight vertex classification, computed
//! for a concrete pair of a maximal independent set `A` and a reference
//! independent set `A*` (usually an optimum).

mod constants;

pub use constants::{
    rational_sqrt, verify_constants, ConstantsReport, InequalityCheck, SqrtEpsilon, Verdict,
};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, VertexSet, Weight};
use crate::search::Solution;

/// Default analysis constant `ε = 1/5308416` (so `√ε = 1/2304`).
pub fn default_analysis_epsilon() -> Weight {
    Weight::new(1.into(), 5_308_416.into())
}

/// Default analysis constant `δ = 1/6`.
pub fn default_delta() -> Weight {
    Weight::new(1.into(), 6.into())
}

/// Charge sent by one vertex `u` of `A*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeEntry {
    pub u: usize,
    /// `N(u, A)`.
    pub neighborhood: VertexSet,
    pub neighborhood_weight: Weight,
    /// `n(u)`: heaviest vertex of `N(u, A)`, lowest id on ties.
    pub heaviest: usize,
    /// `w(u) − w(N(u, A))/2`, sent to `n(u)`; may be negative.
    pub charge: Weight,
}

/// Positive charges received by one vertex `v` of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceiverEntry {
    pub v: usize,
    /// `T_v = { u in A* : charge(u, v) > 0 }`.
    pub senders: VertexSet,
    pub total: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeReport {
    pub a: VertexSet,
    pub a_star: VertexSet,
    pub charges: Vec<ChargeEntry>,
    pub receivers: Vec<ReceiverEntry>,
    /// `Σ_{u∈A*} w(N(u, A))/2`.
    pub first_step_total: Weight,
    /// `Σ_{u∈A*, charge>0} charge(u, n(u))`.
    pub positive_charge_total: Weight,
    pub a_weight: Weight,
    pub a_star_weight: Weight,
    pub d: usize,
}

impl ChargeReport {
    pub fn entry(&self, u: usize) -> Option<&ChargeEntry> {
        self.charges.iter().find(|e| e.u == u)
    }

    pub fn receiver(&self, v: usize) -> Option<&ReceiverEntry> {
        self.receivers.iter().find(|r| r.v == v)
    }

    /// `charge(u, v)`, zero unless `v = n(u)`.
    pub fn charge(&self, u: usize, v: usize) -> Weight {
        match self.entry(u) {
            Some(e) if e.heaviest == v => e.charge.clone(),
            _ => Weight::zero(),
        }
    }

    /// `first_step_total + positive_charge_total`, an upper bound on `w(A*)`.
    pub fn decomposition_bound(&self) -> Weight {
        &self.first_step_total + &self.positive_charge_total
    }

    pub fn decomposition_holds(&self) -> bool {
        self.decomposition_bound() >= self.a_star_weight
    }

    /// `Σ w(N(u, A))/2 <= (d−1)/2 · w(A)`, valid on d-claw free graphs.
    pub fn first_step_bound_holds(&self) -> bool {
        let limit = Weight::new((self.d as i64 - 1).into(), 2.into()) * &self.a_weight;
        self.first_step_total <= limit
    }
}

/// Heaviest vertex of a nonempty set, lowest id on ties.
fn heaviest(inst: &ProblemInstance, set: &VertexSet) -> Option<usize> {
    set.iter().fold(None, |best: Option<usize>, v| match best {
        Some(b) if inst.weight_of(b) >= inst.weight_of(v) => Some(b),
        _ => Some(v),
    })
}

pub fn compute_charges(
    inst: &ProblemInstance,
    a: &Solution<'_>,
    a_star: &Solution<'_>,
) -> Result<ChargeReport> {
    let half = Weight::new(1.into(), 2.into());
    let mut charges = Vec::with_capacity(a_star.vertices().len());
    for u in a_star.vertices().iter() {
        let neighborhood = inst.neighborhood(&VertexSet::singleton(u), a.vertices())?;
        let heaviest = heaviest(inst, &neighborhood).ok_or(Error::NotMaximal { vertex: u })?;
        let neighborhood_weight = inst.weight(&neighborhood)?;
        let charge = inst.weight_of(u) - &neighborhood_weight * &half;
        charges.push(ChargeEntry {
            u,
            neighborhood,
            neighborhood_weight,
            heaviest,
            charge,
        });
    }
    let receivers = a
        .vertices()
        .iter()
        .map(|v| {
            let positive: Vec<&ChargeEntry> = charges
                .iter()
                .filter(|e| e.heaviest == v && e.charge > Weight::zero())
                .collect();
            ReceiverEntry {
                v,
                senders: positive.iter().map(|e| e.u).collect(),
                total: positive
                    .iter()
                    .fold(Weight::zero(), |acc, e| acc + &e.charge),
            }
        })
        .collect();
    let first_step_total = charges
        .iter()
        .fold(Weight::zero(), |acc, e| acc + &e.neighborhood_weight)
        * &half;
    let positive_charge_total = charges
        .iter()
        .filter(|e| e.charge > Weight::zero())
        .fold(Weight::zero(), |acc, e| acc + &e.charge);
    Ok(ChargeReport {
        a: a.vertices().clone(),
        a_star: a_star.vertices().clone(),
        charges,
        receivers,
        first_step_total,
        positive_charge_total,
        a_weight: a.weight().clone(),
        a_star_weight: a_star.weight().clone(),
        d: inst.d(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeBoundCheck {
    pub v: usize,
    pub total: Weight,
    pub limit: Weight,
    pub holds: bool,
}

/// `Σ_{u∈T_v} charge(u, v) <= w(v)/2` for every `v` in `A`.
///
/// Any failure on a claw-optimal `A` means an improving claw was missed.
pub fn verify_charge_bound(inst: &ProblemInstance, report: &ChargeReport) -> Vec<ChargeBoundCheck> {
    report
        .receivers
        .iter()
        .map(|r| {
            let limit = inst.weight_of(r.v) / Weight::from_integer(2.into());
            ChargeBoundCheck {
                v: r.v,
                holds: r.total <= limit,
                total: r.total.clone(),
                limit,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub u: usize,
    pub v: usize,
    pub value: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceivedContribution {
    pub v: usize,
    pub total: Weight,
    /// `total <= w(v)`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentContribution {
    pub u: usize,
    pub total: Weight,
    pub at_heaviest: Weight,
    pub twice_charge: Weight,
    /// `total >= contr(u, n(u)) >= 2·charge(u, n(u))`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionReport {
    /// One entry per `u` in `A*` and `v` in `N(u, A)`.
    pub entries: Vec<Contribution>,
    pub received: Vec<ReceivedContribution>,
    pub sent: Vec<SentContribution>,
}

impl ContributionReport {
    /// `contr(u, v)`; zero when `v` is not in `N(u, A)`.
    pub fn contribution(&self, u: usize, v: usize) -> Weight {
        self.entries
            .iter()
            .find(|c| c.u == u && c.v == v)
            .map(|c| c.value.clone())
            .unwrap_or_else(Weight::zero)
    }

    pub fn all_hold(&self) -> bool {
        self.received.iter().all(|r| r.holds) && self.sent.iter().all(|s| s.holds)
    }
}

/// `contr(u, v) = max{0, (w²(u) − w²(N(u, A) \ {v})) / w(v)}` for `v` in
/// `N(u, A)`.
pub fn compute_contributions(
    inst: &ProblemInstance,
    a: &Solution<'_>,
    a_star: &Solution<'_>,
) -> Result<ContributionReport> {
    let charges = compute_charges(inst, a, a_star)?;
    let mut entries = Vec::new();
    let mut sent = Vec::new();
    for e in &charges.charges {
        let u_sq = inst.weight_of(e.u) * inst.weight_of(e.u);
        let mut total = Weight::zero();
        let mut at_heaviest = Weight::zero();
        for v in e.neighborhood.iter() {
            let mut rest = e.neighborhood.clone();
            rest.remove(v);
            let surplus = &u_sq - inst.weight_sq(&rest)?;
            let value = if surplus > Weight::zero() {
                surplus / inst.weight_of(v)
            } else {
                Weight::zero()
            };
            if v == e.heaviest {
                at_heaviest = value.clone();
            }
            total += &value;
            entries.push(Contribution { u: e.u, v, value });
        }
        let twice_charge = &e.charge * Weight::from_integer(2.into());
        sent.push(SentContribution {
            u: e.u,
            holds: total >= at_heaviest && at_heaviest >= twice_charge,
            total,
            at_heaviest,
            twice_charge,
        });
    }
    let received = a
        .vertices()
        .iter()
        .map(|v| {
            let total = entries
                .iter()
                .filter(|c| c.v == v)
                .fold(Weight::zero(), |acc, c| acc + &c.value);
            ReceivedContribution {
                v,
                holds: &total <= inst.weight_of(v),
                total,
            }
        })
        .collect();
    Ok(ContributionReport {
        entries,
        received,
        sent,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Single,
    Double { v1: usize, v2: usize },
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaStatus {
    /// No termination certificate accompanied `A`.
    NotApplicable,
    Holds,
    /// Vertices of `B̄` whose senders include a `Neither` or several singles.
    Violated(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub analysis_epsilon: Weight,
    pub delta: Weight,
    pub sqrt_epsilon: Weight,
    /// `P = { u in A* : w(N(u, A)) >= 3·w(u) }`.
    pub payback: VertexSet,
    /// Label of every vertex that belongs to some `T_v`, keyed by vertex.
    pub labels: Vec<(usize, Label)>,
    /// `B̄`: receivers whose positive charges exceed `(1−ε)/2 · w(v)`.
    pub near_tight: VertexSet,
    /// `C`: members of `B̄` all of whose senders are double.
    pub all_double: VertexSet,
    /// `D`: union of `T_v` over `C`.
    pub double_senders: VertexSet,
    /// `B = B̄ \ C`.
    pub with_single: VertexSet,
    /// `t(v)` for each `v` in `B` with exactly one single sender.
    pub partners: Vec<(usize, usize)>,
    /// `B*`: image of `t`.
    pub partner_set: VertexSet,
    pub lemma: LemmaStatus,
}

impl Classification {
    pub fn label(&self, u: usize) -> Option<Label> {
        self.labels.iter().find(|(x, _)| *x == u).map(|(_, l)| *l)
    }

    /// `t` is injective on its domain.
    pub fn partners_bijective(&self) -> bool {
        self.partner_set.len() == self.partners.len()
    }
}

fn in_band(x: &Weight, lo: &Weight, hi: &Weight) -> bool {
    lo <= x && x <= hi
}

/// Single-vertex conditions for `u` against `v`:
/// `w(u)/w(v) ∈ [1−√ε, 1+√ε]` and `w(N(u, A)) <= (1+√ε)·w(v)`.
pub fn is_single(
    inst: &ProblemInstance,
    a: &VertexSet,
    u: usize,
    v: usize,
    sqrt_eps: &Weight,
) -> Result<bool> {
    let nbhd = inst.neighborhood(&VertexSet::singleton(u), a)?;
    let (wu, wv) = (inst.weight_of(u), inst.weight_of(v));
    let one = Weight::one();
    Ok(in_band(&(wu / wv), &(&one - sqrt_eps), &(&one + sqrt_eps))
        && inst.weight(&nbhd)? <= (&one + sqrt_eps) * wv)
}

/// Double-vertex conditions with `v1 = v` and `v2` the heaviest other vertex
/// of `N(u, A)`; returns `(v1, v2)` when they hold.
pub fn is_double(
    inst: &ProblemInstance,
    a: &VertexSet,
    u: usize,
    v: usize,
    sqrt_eps: &Weight,
) -> Result<Option<(usize, usize)>> {
    let nbhd = inst.neighborhood(&VertexSet::singleton(u), a)?;
    if nbhd.len() < 2 {
        return Ok(None);
    }
    let mut others = nbhd.clone();
    others.remove(v);
    let Some(v2) = heaviest(inst, &others) else {
        return Ok(None);
    };
    let one = Weight::one();
    let two = Weight::from_integer(2.into());
    let (wu, w1, w2) = (inst.weight_of(u), inst.weight_of(v), inst.weight_of(v2));
    let total = inst.weight(&nbhd)?;
    let holds = in_band(&(wu / w1), &(&one - sqrt_eps), &(&one + sqrt_eps))
        && in_band(&(w2 / w1), &(&one - sqrt_eps), &one)
        && (&two - sqrt_eps) * w1 <= total
        && total < &two * wu;
    Ok(holds.then_some((v, v2)))
}

/// Builds `P`, the single/double labels, `B̄`, `C`, `D`, `B`, `B*` and `t`.
///
/// With `certified = false` the structural lemma is reported as not
/// applicable; otherwise every `v` in `B̄` must have only single or double
/// senders and at most one single.
pub fn classify(
    inst: &ProblemInstance,
    a: &Solution<'_>,
    a_star: &Solution<'_>,
    analysis_epsilon: &Weight,
    delta: &Weight,
    certified: bool,
) -> Result<Classification> {
    let sqrt_eps = rational_sqrt(analysis_epsilon)
        .ok_or_else(|| Error::IrrationalSqrt(analysis_epsilon.clone()))?;
    let report = compute_charges(inst, a, a_star)?;
    let three = Weight::from_integer(3.into());

    let payback = report
        .charges
        .iter()
        .filter(|e| e.neighborhood_weight >= &three * inst.weight_of(e.u))
        .map(|e| e.u)
        .collect();

    let mut labels = Vec::new();
    for r in &report.receivers {
        for u in r.senders.iter() {
            let label = if is_single(inst, a.vertices(), u, r.v, &sqrt_eps)? {
                Label::Single
            } else if let Some((v1, v2)) = is_double(inst, a.vertices(), u, r.v, &sqrt_eps)? {
                Label::Double { v1, v2 }
            } else {
                Label::Neither
            };
            labels.push((u, label));
        }
    }
    labels.sort_by_key(|(u, _)| *u);
    let label_of = |u: usize| labels.iter().find(|(x, _)| *x == u).map(|(_, l)| *l);

    let threshold_factor = (Weight::one() - analysis_epsilon) / Weight::from_integer(2.into());
    let near_tight: VertexSet = report
        .receivers
        .iter()
        .filter(|r| r.total > &threshold_factor * inst.weight_of(r.v))
        .map(|r| r.v)
        .collect();

    let mut all_double = VertexSet::new();
    let mut double_senders = VertexSet::new();
    let mut with_single = VertexSet::new();
    let mut partners = Vec::new();
    let mut violations = Vec::new();
    for v in near_tight.iter() {
        let senders = &report.receiver(v).expect("v is in A").senders;
        let sender_labels: Vec<Label> = senders.iter().filter_map(label_of).collect();
        let singles: Vec<usize> = senders
            .iter()
            .filter(|&u| label_of(u) == Some(Label::Single))
            .collect();
        if sender_labels.contains(&Label::Neither) || singles.len() > 1 {
            violations.push(v);
        }
        if sender_labels
            .iter()
            .all(|l| matches!(l, Label::Double { .. }))
        {
            all_double.insert(v);
            double_senders = double_senders.union(senders);
        } else {
            with_single.insert(v);
            if let [t] = singles.as_slice() {
                partners.push((v, *t));
            }
        }
    }
    let partner_set = partners.iter().map(|&(_, t)| t).collect();
    let lemma = if !certified {
        LemmaStatus::NotApplicable
    } else if violations.is_empty() {
        LemmaStatus::Holds
    } else {
        LemmaStatus::Violated(violations)
    };

    Ok(Classification {
        analysis_epsilon: analysis_epsilon.clone(),
        delta: delta.clone(),
        sqrt_epsilon: sqrt_eps,
        payback,
        labels,
        near_tight,
        all_double,
        double_senders,
        with_single,
        partners,
        partner_set,
        lemma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::berman_tight;

    fn int(v: i64) -> Weight {
        Weight::from_integer(v.into())
    }

    fn frac(n: i64, d: i64) -> Weight {
        Weight::new(n.into(), d.into())
    }

    #[test]
    fn shared_vertex_charges_half_its_weight() {
        let inst = ProblemInstance::new(vec![int(3), int(5)], &[], 3).unwrap();
        let both = Solution::new(&inst, VertexSet::from([0, 1])).unwrap();
        let report = compute_charges(&inst, &both, &both).unwrap();
        assert_eq!(report.charge(0, 0), frac(3, 2));
        assert_eq!(report.charge(1, 1), frac(5, 2));
        assert!(verify_charge_bound(&inst, &report)
            .iter()
            .all(|c| c.holds && c.total == c.limit));
        let contr = compute_contributions(&inst, &both, &both).unwrap();
        assert_eq!(contr.contribution(0, 0), int(3));
        assert_eq!(contr.contribution(1, 1), int(5));
    }

    #[test]
    fn single_neighbor_of_equal_weight() {
        let inst = ProblemInstance::unweighted(2, &[(0, 1)], 3).unwrap();
        let a = Solution::new(&inst, VertexSet::singleton(1)).unwrap();
        let opt = Solution::new(&inst, VertexSet::singleton(0)).unwrap();
        let report = compute_charges(&inst, &a, &opt).unwrap();
        assert_eq!(report.charge(0, 1), frac(1, 2));
        assert_eq!(report.charge(0, 0), int(0));
        let contr = compute_contributions(&inst, &a, &opt).unwrap();
        assert_eq!(contr.contribution(0, 1), int(1));
    }

    #[test]
    fn tight_instance_sends_zero_charges() {
        let t = berman_tight(6, Weight::one()).unwrap();
        let a = Solution::new(&t.instance, t.a_side.clone()).unwrap();
        let opt = Solution::new(&t.instance, t.b_side.clone()).unwrap();
        let report = compute_charges(&t.instance, &a, &opt).unwrap();
        // {1,3} is vertex 11 and sends nothing; each singleton sends 1/2
        let pair = report.entry(11).unwrap();
        assert_eq!(pair.neighborhood_weight, int(2));
        assert_eq!(pair.charge, int(0));
        assert_eq!(report.charge(7, 2), frac(1, 2));
        for r in &report.receivers {
            assert_eq!(r.senders, VertexSet::singleton(r.v + 5));
            assert_eq!(r.total, frac(1, 2));
        }
        assert!(verify_charge_bound(&t.instance, &report)
            .iter()
            .all(|c| c.holds && c.total == c.limit));
        assert!(report.decomposition_holds());
        assert!(report.first_step_bound_holds());

        let class = classify(
            &t.instance,
            &a,
            &opt,
            &default_analysis_epsilon(),
            &default_delta(),
            true,
        )
        .unwrap();
        assert_eq!(class.near_tight, t.a_side);
        assert_eq!(class.with_single, t.a_side);
        assert!(class.all_double.is_empty());
        assert_eq!(class.partners.len(), 5);
        assert!(class.partners_bijective());
        assert!(class.payback.is_empty());
        assert_eq!(class.lemma, LemmaStatus::Holds);
    }

    #[test]
    fn requires_maximal_reference() {
        let inst = ProblemInstance::unweighted(2, &[], 3).unwrap();
        let a = Solution::new(&inst, VertexSet::singleton(0)).unwrap();
        let opt = Solution::new(&inst, VertexSet::from([0, 1])).unwrap();
        assert_eq!(
            compute_charges(&inst, &a, &opt).unwrap_err(),
            Error::NotMaximal { vertex: 1 }
        );
    }

    #[test]
    fn identical_sets_are_all_single() {
        let inst = ProblemInstance::new(vec![int(2), int(7), int(1)], &[(0, 1)], 3).unwrap();
        let s = Solution::new(&inst, VertexSet::from([1, 2])).unwrap();
        let class = classify(
            &inst,
            &s,
            &s,
            &default_analysis_epsilon(),
            &default_delta(),
            true,
        )
        .unwrap();
        assert_eq!(class.near_tight, VertexSet::from([1, 2]));
        assert_eq!(class.with_single, VertexSet::from([1, 2]));
        assert!(class.all_double.is_empty());
        assert_eq!(class.partners, vec![(1, 1), (2, 2)]);
        assert!(class.partners_bijective());
        assert_eq!(class.label(1), Some(Label::Single));
        assert_eq!(class.lemma, LemmaStatus::Holds);
    }

    #[test]
    fn payback_boundary_is_inclusive() {
        // u = 0 of weight 1 sees neighbors of total weight exactly 3
        let inst =
            ProblemInstance::new(vec![int(1), int(2), int(1)], &[(0, 1), (0, 2)], 3).unwrap();
        let a = Solution::new(&inst, VertexSet::from([1, 2])).unwrap();
        let opt = Solution::new(&inst, VertexSet::singleton(0)).unwrap();
        let class = classify(
            &inst,
            &a,
            &opt,
            &default_analysis_epsilon(),
            &default_delta(),
            false,
        )
        .unwrap();
        assert_eq!(class.payback, VertexSet::singleton(0));
        assert_eq!(class.lemma, LemmaStatus::NotApplicable);
    }

    #[test]
    fn double_vertex_is_recognised() {
        // u of weight 1 between two A-vertices of weight 1: w(N) = 2 is not < 2·w(u)
        // so push u slightly heavier
        let inst =
            ProblemInstance::new(vec![frac(1001, 1000), int(1), int(1)], &[(0, 1), (0, 2)], 3)
                .unwrap();
        let a = VertexSet::from([1, 2]);
        let s = frac(1, 100);
        assert_eq!(is_double(&inst, &a, 0, 1, &s).unwrap(), Some((1, 2)));
        assert!(!is_single(&inst, &a, 0, 1, &s).unwrap());
    }

    #[test]
    fn irrational_epsilon_is_rejected_by_classify() {
        let inst = ProblemInstance::unweighted(1, &[], 3).unwrap();
        let s = Solution::new(&inst, VertexSet::singleton(0)).unwrap();
        let err = classify(&inst, &s, &s, &frac(1, 2), &default_delta(), false).unwrap_err();
        assert!(matches!(err, Error::IrrationalSqrt(_)));
    }
}
