//! Integer squared weights used inside the search loops.
//!
//! All weights are rewritten over their common denominator `L`, so `w²` sums
//! become integer sums scaled by `L²`. Small instances run on `i128`; anything
//! that could overflow falls back to `BigInt`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::graph::ProblemInstance;

pub(crate) trait Potential: Clone + Ord + Send + Sync {
    fn zero() -> Self;
    fn add_ref(&mut self, other: &Self);
    fn sub_ref(&mut self, other: &Self);
    fn times(&self, k: usize) -> Self;
    fn is_positive(&self) -> bool;
}

impl Potential for i128 {
    fn zero() -> Self {
        0
    }
    fn add_ref(&mut self, other: &Self) {
        *self += *other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= *other;
    }
    fn times(&self, k: usize) -> Self {
        *self * k as i128
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl Potential for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn times(&self, k: usize) -> Self {
        self * BigInt::from(k)
    }
    fn is_positive(&self) -> bool {
        self.sign() == num_bigint::Sign::Plus
    }
}

pub(crate) enum SquaredWeights {
    Small(Vec<i128>),
    Large(Vec<BigInt>),
}

impl SquaredWeights {
    pub(crate) fn new(inst: &ProblemInstance) -> Self {
        let (numers, _) = inst.integer_weights();
        let squares: Vec<BigInt> = numers.iter().map(|a| a * a).collect();
        let n = BigInt::from(inst.n().max(1));
        // every sum and scaled bound stays below n² · max w²
        let headroom = BigInt::from(1u128 << 120);
        let fits = squares.iter().all(|s| s * &n * &n < headroom);
        if fits {
            Self::Small(
                squares
                    .iter()
                    .map(|s| i128::try_from(s).expect("checked against headroom"))
                    .collect(),
            )
        } else {
            Self::Large(squares)
        }
    }
}
