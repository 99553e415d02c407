//! Exact verification of the constant inequalities behind the `d/2 − εδ/2`
//! guarantee.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The interval enclosure of `√ε` was too wide to decide.
    Undecided,
    /// The inequality needs `d >= 3`.
    NotApplicable,
}

impl Verdict {
    fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undecided, _) | (_, Undecided) => Undecided,
            (NotApplicable, x) | (x, NotApplicable) => x,
            (Pass, Pass) => Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityCheck {
    pub index: u8,
    pub statement: &'static str,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SqrtEpsilon {
    Exact(Weight),
    /// `lo <= √ε <= hi`, used when `ε` is not a rational square.
    Enclosure {
        lo: Weight,
        hi: Weight,
    },
}

impl SqrtEpsilon {
    pub fn is_exact(&self) -> bool {
        matches!(self, SqrtEpsilon::Exact(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsReport {
    pub epsilon: Weight,
    pub delta: Weight,
    pub d: usize,
    pub sqrt_epsilon: SqrtEpsilon,
    pub checks: Vec<InequalityCheck>,
    /// `εδ`.
    pub eps_delta: Weight,
    /// `εδ/2`, the additive improvement over `d/2`.
    pub additive_gain: Weight,
}

impl ConstantsReport {
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| matches!(c.verdict, Verdict::Pass | Verdict::NotApplicable))
    }

    pub fn passed(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.verdict == Verdict::Pass)
            .count()
    }

    pub fn verdict(&self, index: u8) -> Option<Verdict> {
        self.checks
            .iter()
            .find(|c| c.index == index)
            .map(|c| c.verdict)
    }

    /// The guaranteed ratio `d/2 − εδ/2`.
    pub fn ratio(&self) -> Weight {
        Weight::new(BigInt::from(self.d), 2.into()) - &self.additive_gain
    }
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn rational_sqrt(x: &Weight) -> Option<Weight> {
    if x.is_negative() {
        return None;
    }
    let root = |v: &BigInt| {
        let r = v.sqrt();
        (&r * &r == *v).then_some(r)
    };
    Some(Weight::new(root(x.numer())?, root(x.denom())?))
}

const ENCLOSURE_BITS: u32 = 96;

/// `[r/(q·2^k), (r+1)/(q·2^k)]` with `r = ⌊√(p·q·4^k)⌋` for `x = p/q`.
fn sqrt_enclosure(x: &Weight) -> (Weight, Weight) {
    let scale = BigInt::one() << ENCLOSURE_BITS;
    let radicand = x.numer() * x.denom() * &scale * &scale;
    let r = radicand.sqrt();
    let den = x.denom() * &scale;
    (Weight::new(r.clone(), den.clone()), Weight::new(r + 1, den))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Interval {
    lo: Weight,
    hi: Weight,
}

impl Interval {
    fn exact(x: Weight) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    fn int(v: i64) -> Self {
        Self::exact(Weight::from_integer(v.into()))
    }

    fn frac(n: i64, d: i64) -> Self {
        Self::exact(Weight::new(n.into(), d.into()))
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let products = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        Self {
            lo: products.iter().min().cloned().expect("four products"),
            hi: products.iter().max().cloned().expect("four products"),
        }
    }

    fn div(&self, o: &Self) -> Option<Self> {
        if o.lo <= Weight::zero() && o.hi >= Weight::zero() {
            return None;
        }
        let inv = Self {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        };
        Some(self.mul(&inv))
    }

    fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

fn le(a: &Interval, b: &Interval) -> Verdict {
    if a.hi <= b.lo {
        Verdict::Pass
    } else if a.lo > b.hi {
        Verdict::Fail
    } else {
        Verdict::Undecided
    }
}

fn lt(a: &Interval, b: &Interval) -> Verdict {
    if a.hi < b.lo {
        Verdict::Pass
    } else if a.lo >= b.hi {
        Verdict::Fail
    } else {
        Verdict::Undecided
    }
}

fn quotient(num: &Interval, den: &Interval) -> std::result::Result<Interval, Verdict> {
    num.div(den).ok_or(if den.is_point() {
        Verdict::Fail
    } else {
        Verdict::Undecided
    })
}

fn check_1(s: &Interval) -> Verdict {
    let i = Interval::int;
    let q = match quotient(&i(6).sub(&i(9).mul(s)), &i(4).sub(&i(10).mul(s))) {
        Ok(q) => q,
        Err(v) => return v,
    };
    let lhs = i(4).sub(&i(2).mul(&q)).sub(&i(9).mul(s));
    le(&Interval::frac(49, 50), &lhs)
}

fn check_3(s: &Interval, e: &Interval, delta: &Interval, d: &Interval) -> Verdict {
    let i = Interval::int;
    let ed = e.mul(delta);
    let c = Interval::frac(25, 12).mul(&ed);
    let lhs = i(1)
        .add(s)
        .mul(&i(1).sub(delta).sub(&c))
        .add(&Interval::frac(3, 4).mul(d).mul(&delta.add(&c)))
        .add(&ed);
    let rhs = d.sub(&ed).mul(&Interval::frac(1, 2));
    le(&lhs, &rhs)
}

fn check_10(s: &Interval) -> Verdict {
    let i = Interval::int;
    let q = match quotient(&i(6).sub(&i(9).mul(s)), &i(4).sub(&i(10).mul(s))) {
        Ok(q) => q,
        Err(v) => return v,
    };
    let lhs = i(2).sub(&i(10).mul(s)).mul(&q);
    le(&Interval::frac(149, 50), &lhs)
}

fn check_11(s: &Interval) -> Verdict {
    let i = Interval::int;
    let a = i(2).sub(&i(10).mul(s));
    // 2−10s <= 6−9s  ⟺  −4 <= s, and 2−10s <= 4−10s always
    le(&i(-4), s).and(le(&i(2), &i(4))).and(lt(&i(0), &a))
}

/// Checks the eleven constant inequalities for `(ε, δ, d)` in exact rational
/// arithmetic, falling back to a certified enclosure of `√ε` when `ε` is not a
/// rational square.
pub fn verify_constants(epsilon: &Weight, delta: &Weight, d: usize) -> Result<ConstantsReport> {
    if epsilon.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be nonnegative, got {epsilon}"
        )));
    }
    let (sqrt_epsilon, s) = match rational_sqrt(epsilon) {
        Some(r) => (SqrtEpsilon::Exact(r.clone()), Interval::exact(r)),
        None => {
            let (lo, hi) = sqrt_enclosure(epsilon);
            (
                SqrtEpsilon::Enclosure {
                    lo: lo.clone(),
                    hi: hi.clone(),
                },
                Interval { lo, hi },
            )
        }
    };
    let e = Interval::exact(epsilon.clone());
    let dl = Interval::exact(delta.clone());
    let dd = Interval::exact(Weight::from_integer(BigInt::from(d)));
    let i = Interval::int;
    let f = Interval::frac;
    let with_d = |v: Verdict| if d >= 3 { v } else { Verdict::NotApplicable };

    let verdicts: [(u8, &'static str, Verdict); 11] = [
        (1, "4 - 2(6-9s)/(4-10s) - 9s >= 49/50", check_1(&s)),
        (
            2,
            "9(4s + 5e) < 1",
            lt(&i(9).mul(&i(4).mul(&s).add(&i(5).mul(&e))), &i(1)),
        ),
        (
            3,
            "(1+s)(1-delta-25/12 e delta) + 3d/4 (delta + 25/12 e delta) + e delta <= (d - e delta)/2",
            with_d(check_3(&s, &e, &dl, &dd)),
        ),
        (
            4,
            "36s + 45e <= 1/32",
            le(&i(36).mul(&s).add(&i(45).mul(&e)), &f(1, 32)),
        ),
        (
            5,
            "0 < e < 16/100 < 1/4",
            lt(&i(0), &e).and(lt(&e, &f(16, 100))).and(lt(&f(16, 100), &f(1, 4))),
        ),
        (6, "1 - 3s > 1/2", lt(&f(1, 2), &i(1).sub(&i(3).mul(&s)))),
        (7, "1 + s < 3d/4", with_d(lt(&i(1).add(&s), &f(3, 4).mul(&dd)))),
        (
            8,
            "4(1 - 3s/2)(1 - s) >= 3 > 149/50",
            le(&i(3), &i(4).mul(&i(1).sub(&f(3, 2).mul(&s))).mul(&i(1).sub(&s)))
                .and(lt(&f(149, 50), &i(3))),
        ),
        (
            9,
            "49(1-e)/100 >= 12/25",
            le(&f(12, 25), &f(49, 100).mul(&i(1).sub(&e))),
        ),
        (10, "(2-10s)(6-9s)/(4-10s) >= 149/50", check_10(&s)),
        (11, "min{2-10s, 6-9s, 4-10s} = 2-10s > 0", check_11(&s)),
    ];

    let eps_delta = epsilon * delta;
    Ok(ConstantsReport {
        epsilon: epsilon.clone(),
        delta: delta.clone(),
        d,
        sqrt_epsilon,
        checks: verdicts
            .into_iter()
            .map(|(index, statement, verdict)| InequalityCheck {
                index,
                statement,
                verdict,
            })
            .collect(),
        additive_gain: &eps_delta / Weight::from_integer(2.into()),
        eps_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> Weight {
        Weight::new(n.into(), d.into())
    }

    #[test]
    fn default_constants_pass() {
        let r = verify_constants(&frac(1, 5_308_416), &frac(1, 6), 3).unwrap();
        assert!(r.all_pass(), "{:?}", r.checks);
        assert_eq!(r.passed(), 11);
        assert_eq!(r.sqrt_epsilon, SqrtEpsilon::Exact(frac(1, 2304)));
        assert_eq!(r.eps_delta, frac(1, 31_850_496));
        assert_eq!(r.additive_gain, frac(1, 63_700_992));
    }

    #[test]
    fn quarter_violates_the_epsilon_range() {
        let r = verify_constants(&frac(1, 4), &frac(1, 6), 3).unwrap();
        assert_eq!(r.verdict(5), Some(Verdict::Fail));
        assert!(!r.all_pass());
    }

    #[test]
    fn small_d_skips_dependent_checks() {
        let r = verify_constants(&frac(1, 5_308_416), &frac(1, 6), 2).unwrap();
        assert_eq!(r.verdict(3), Some(Verdict::NotApplicable));
        assert_eq!(r.verdict(7), Some(Verdict::NotApplicable));
        assert_eq!(r.verdict(1), Some(Verdict::Pass));
    }

    #[test]
    fn irrational_root_is_enclosed() {
        let r = verify_constants(&frac(1, 5_000_000), &frac(1, 6), 4).unwrap();
        let SqrtEpsilon::Enclosure { lo, hi } = &r.sqrt_epsilon else {
            panic!("expected an enclosure");
        };
        let eps = frac(1, 5_000_000);
        assert!(lo * lo <= eps && eps <= hi * hi);
        assert!(r.all_pass(), "{:?}", r.checks);
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_sqrt(&frac(9, 16)), Some(frac(3, 4)));
        assert_eq!(rational_sqrt(&frac(2, 1)), None);
        assert_eq!(rational_sqrt(&frac(-1, 4)), None);
    }

    #[test]
    fn series_identity() {
        // 9(4s + 5e) for the default constants
        let s = frac(1, 2304);
        let e = frac(1, 5_308_416);
        let v = Weight::from_integer(9.into())
            * (Weight::from_integer(4.into()) * s + Weight::from_integer(5.into()) * e);
        assert_eq!(v, frac(82_989, 5_308_416));
    }
}
