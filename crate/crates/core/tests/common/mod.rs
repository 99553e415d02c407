#![allow(dead_code)]

use claw_mwis::{ProblemInstance, VertexSet, Weight};
use proptest::prelude::*;

pub fn int(v: i64) -> Weight {
    Weight::from_integer(v.into())
}

pub fn frac(n: i64, d: i64) -> Weight {
    Weight::new(n.into(), d.into())
}

/// Random weighted graph on at most `max_n` vertices with weights `m/den`.
pub fn graph(max_n: usize, d: usize) -> impl Strategy<Value = ProblemInstance> {
    (0..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            (
                prop::collection::vec((1i64..=9, 1i64..=3), n),
                prop::collection::vec(prop::bool::weighted(0.35), pairs),
            )
        })
        .prop_map(move |(ws, mask)| {
            let n = ws.len();
            let weights = ws.into_iter().map(|(m, den)| frac(m, den)).collect();
            let mut edges = Vec::new();
            let mut bit = mask.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if bit.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            ProblemInstance::new(weights, &edges, d).unwrap()
        })
}

/// A subset of the vertices chosen by a bit mask.
pub fn subset(inst: &ProblemInstance, mask: u64) -> VertexSet {
    (0..inst.n()).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Greedy independent subset of `mask`, taking vertices by id.
pub fn independent_subset(inst: &ProblemInstance, mask: u64) -> VertexSet {
    let mut s = VertexSet::new();
    for v in subset(inst, mask).iter() {
        if s.iter().all(|u| !inst.adjacent(u, v)) {
            s.insert(v);
        }
    }
    s
}

/// Every `k`-subset of `pool`.
pub fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..pool.len() {
        for mut rest in combinations(&pool[i + 1..], k - 1) {
            rest.insert(0, pool[i]);
            out.push(rest);
        }
    }
    out
}

/// Direct definition of d-claw freeness: no vertex has `d` pairwise
/// non-adjacent neighbors.
pub fn brute_claw_free(inst: &ProblemInstance, d: usize) -> bool {
    (0..inst.n()).all(|c| {
        combinations(inst.neighbors(c), d).iter().all(|t| {
            t.iter()
                .enumerate()
                .any(|(i, &a)| t[i + 1..].iter().any(|&b| inst.adjacent(a, b)))
        })
    })
}
