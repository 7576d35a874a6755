//! Exact modularity values.
//!
//! Every modularity quantity of a graph with `m` edges is a rational number
//! with denominator dividing `4m²`, so we carry only the numerator. The
//! numerator type is generic: `i64` is enough for small graphs, `i128` for
//! anything that fits in memory, and `BigInt` for the hardness gadgets whose
//! edge counts grow quadratically in the input.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Signed integer type usable as the numerator of a [`ScaledScore`].
pub trait ScoreInt:
    Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn from_u(v: u64) -> Self {
        Self::from_u64(v).expect("u64 fits every score integer type")
    }

    fn to_big(&self) -> BigInt {
        match self.to_i128() {
            Some(v) => BigInt::from(v),
            None => self.to_string().parse().expect("integer Display output parses"),
        }
    }

    fn from_big(v: &BigInt) -> Option<Self> {
        match v.to_i128() {
            Some(small) => Self::from_i128(small),
            None => Self::from_str_radix(&v.to_string(), 10).ok(),
        }
    }
}

impl<T> ScoreInt for T where
    T: Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Ord
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// `4m²`, the common denominator of every modularity value on an `m`-edge graph.
pub fn scale<S: ScoreInt>(m: u64) -> S {
    let m = S::from_u(m);
    S::from_u(4) * m.clone() * m
}

/// `4m·e − vol²`: the scaled contribution of one part with `e` internal edges
/// and volume `vol`.
pub fn part_value<S: ScoreInt>(m: u64, internal: u64, volume: u64) -> S {
    S::from_u(4) * S::from_u(m) * S::from_u(internal) - S::from_u(volume) * S::from_u(volume)
}

/// A modularity value `num / 4m²`, exact.
#[derive(Clone, Debug)]
pub struct ScaledScore<S> {
    num: S,
    m: u64,
}

impl<S: ScoreInt> ScaledScore<S> {
    pub fn new(num: S, m: u64) -> Self {
        assert!(m >= 1, "scaled scores need at least one edge");
        Self { num, m }
    }

    pub fn zero(m: u64) -> Self {
        Self::new(S::zero(), m)
    }

    pub fn one(m: u64) -> Self {
        Self::new(scale(m), m)
    }

    pub fn num(&self) -> &S {
        &self.num
    }

    pub fn into_num(self) -> S {
        self.num
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The denominator `4m²`.
    pub fn scale(&self) -> S {
        scale(self.m)
    }

    /// Reduced fraction `(p, q)` with `q > 0`.
    pub fn fraction(&self) -> (S, S) {
        let den = self.scale();
        let g = self.num.gcd(&den);
        (self.num.clone() / g.clone(), den / g)
    }

    pub fn to_f64(&self) -> f64 {
        let (p, q) = self.fraction();
        p.to_f64().unwrap_or(f64::NAN) / q.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `1 − self`, i.e. the modularity deficit when `self` is a partition score.
    pub fn complement(&self) -> Self {
        Self::new(self.scale() - self.num.clone(), self.m)
    }

    /// Exact test of `self ≥ (p/q)·other`, `q > 0`.
    pub fn ge_scaled(&self, other: &Self, p: u64, q: u64) -> bool {
        let lhs = self.num.clone() * S::from_u(q) * other.scale();
        let rhs = other.num.clone() * S::from_u(p) * self.scale();
        lhs >= rhs
    }

    /// Exact test of `self > (p/q)·other`, `q > 0`.
    pub fn gt_scaled(&self, other: &Self, p: u64, q: u64) -> bool {
        let lhs = self.num.clone() * S::from_u(q) * other.scale();
        let rhs = other.num.clone() * S::from_u(p) * self.scale();
        lhs > rhs
    }

    /// Re-express the value over another integer type.
    pub fn convert<T: ScoreInt>(&self) -> ScaledScore<T> {
        let num = T::from_big(&self.num.to_big()).expect("score does not fit target type");
        ScaledScore::new(num, self.m)
    }

    /// Decimal rendering with exactly `places` fractional digits, rounded half
    /// away from zero.
    pub fn to_decimal_string(&self, places: usize) -> String {
        decimal_string(&self.num.to_big(), &self.scale().to_big(), places)
    }
}

/// `num/den` (den > 0) to a fixed number of decimal places.
pub fn decimal_string(num: &BigInt, den: &BigInt, places: usize) -> String {
    let negative = num.is_negative();
    let pow = num_traits::pow(BigInt::from(10u32), places);
    let scaled = num.abs() * pow.clone() * 2 + den;
    let rounded: BigInt = scaled / (den * 2);
    let (int_part, frac_part) = rounded.div_rem(&pow);
    let mut out = String::new();
    if negative && !rounded.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if places > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac_part.to_string(), width = places));
    }
    out
}

impl<S: ScoreInt> PartialEq for ScaledScore<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: ScoreInt> Eq for ScaledScore<S> {}

impl<S: ScoreInt> PartialOrd for ScaledScore<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: ScoreInt> Ord for ScaledScore<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.m == other.m {
            self.num.cmp(&other.num)
        } else {
            (self.num.clone() * other.scale()).cmp(&(other.num.clone() * self.scale()))
        }
    }
}

impl<S: ScoreInt> Add for ScaledScore<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.m, rhs.m, "adding scores of different graphs");
        Self::new(self.num + rhs.num, self.m)
    }
}

impl<S: ScoreInt> Sub for ScaledScore<S> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.m, rhs.m, "subtracting scores of different graphs");
        Self::new(self.num - rhs.num, self.m)
    }
}

impl<S: ScoreInt> Neg for ScaledScore<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.num, self.m)
    }
}

impl<S: ScoreInt> Display for ScaledScore<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.fraction();
        if q.is_one() {
            write!(f, "{p}")
        } else {
            write!(f, "{p}/{q}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_reduce() {
        let q = ScaledScore::<i64>::new(2, 1);
        assert_eq!(q.fraction(), (1, 2));
        assert_eq!(q.to_string(), "1/2");
        assert_eq!(ScaledScore::<i64>::zero(5).to_string(), "0");
        assert_eq!(ScaledScore::<i64>::one(5).to_string(), "1");
    }

    #[test]
    fn cross_scale_comparison() {
        // 1/2 at m = 1 and 50/100 at m = 5
        let a = ScaledScore::<i128>::new(2, 1);
        let b = ScaledScore::<i128>::new(50, 5);
        assert_eq!(a, b);
        assert!(ScaledScore::<i128>::new(51, 5) > a);
    }

    #[test]
    fn decimal_rendering() {
        let q = ScaledScore::<i64>::new(8, 5); // 8/100
        assert_eq!(q.to_decimal_string(12), "0.080000000000");
        let third = decimal_string(&BigInt::from(1), &BigInt::from(3), 4);
        assert_eq!(third, "0.3333");
        let neg = decimal_string(&BigInt::from(-2), &BigInt::from(3), 3);
        assert_eq!(neg, "-0.667");
        assert_eq!(decimal_string(&BigInt::from(7), &BigInt::from(1), 0), "7");
    }

    #[test]
    fn scaled_inequalities() {
        let half = ScaledScore::<i64>::new(2, 1);
        let quarter = ScaledScore::<i64>::new(4, 4); // 4/64 = 1/16
        assert!(half.ge_scaled(&half, 1, 1));
        assert!(!half.gt_scaled(&half, 1, 1));
        assert!(half.gt_scaled(&half, 1, 2));
        assert!(half.gt_scaled(&quarter, 7, 1));
        assert!(!half.ge_scaled(&quarter, 9, 1));
    }

    #[test]
    fn big_and_small_integers_agree() {
        let a = ScaledScore::<i64>::new(-3, 7);
        let b: ScaledScore<BigInt> = a.convert();
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a.complement().to_string(), b.complement().to_string());
    }
}
