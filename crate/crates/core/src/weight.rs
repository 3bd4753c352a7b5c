//! Scalar types usable as transverse-measure weights.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub type Rational = BigRational;

/// A weight scalar: exact rationals on the combinatorial layer, `f64` for
/// eigenvector output.
pub trait Weight: Clone + core::fmt::Debug {
    fn zero() -> Self;
    fn from_count(n: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Weight for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn from_count(n: u64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_positive(&self) -> bool {
        *self > <Rational as Zero>::zero()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_count(n: u64) -> Self {
        n as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_positive(&self) -> bool {
        self.is_finite() && *self > 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// `n/d` as an exact rational.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
