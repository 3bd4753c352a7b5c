//! Closed enclosures `[lo, hi]` with outward-rounded arithmetic.
//!
//! Basic operations recover the exact rounding error (TwoSum for addition,
//! FMA residuals for products, quotients and square roots) so an endpoint is
//! only nudged by one ulp when the floating-point result is actually inexact.
//! `ln` and `exp` come from `libm`, which is faithful (error below one ulp),
//! so their results are widened by one ulp in each direction unless the
//! argument is an exact special value.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntervalError {
    #[error("invalid interval [{lo}, {hi}]")]
    Inverted { lo: f64, hi: f64 },
    #[error("non-finite interval endpoint")]
    NonFinite,
    #[error("distance interval [{lo}, {hi}] violates certification (tolerance {tol})")]
    Certification { lo: f64, hi: f64, tol: f64 },
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

// Sign of the rounding error of `a * b`, from the exact FMA residual.
fn mul_err(a: f64, b: f64, p: f64) -> f64 {
    if !p.is_finite() || p == 0.0 {
        return 0.0;
    }
    math::fma(a, b, -p)
}

pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if mul_err(a, b, p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if mul_err(a, b, p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

// Sign of (a/b - q), from the exact remainder a - q*b.
fn div_err(a: f64, b: f64, q: f64) -> f64 {
    if !q.is_finite() || q == 0.0 && a == 0.0 {
        return 0.0;
    }
    let r = math::fma(-q, b, a);
    if b > 0.0 {
        r
    } else {
        -r
    }
}

pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if div_err(a, b, q) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if div_err(a, b, q) > 0.0 {
        q.next_up()
    } else {
        q
    }
}

fn sqrt_down(x: f64) -> f64 {
    let s = math::sqrt(x);
    if math::fma(-s, s, x) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn sqrt_up(x: f64) -> f64 {
    let s = math::sqrt(x);
    if math::fma(-s, s, x) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

fn ln_down(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else {
        math::ln(x).next_down()
    }
}

fn ln_up(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else {
        math::ln(x).next_up()
    }
}

fn exp_down(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        math::exp(x).next_down().max(0.0)
    }
}

fn exp_up(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        math::exp(x).next_up()
    }
}

/// A certified enclosure `[lo, hi]` of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ValueInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::NonFinite);
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_within(&self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }

    pub fn is_degenerate(&self, tol: f64) -> bool {
        self.width() <= tol
    }

    pub fn sqr(self) -> Self {
        if self.lo >= 0.0 {
            Self {
                lo: mul_down(self.lo, self.lo),
                hi: mul_up(self.hi, self.hi),
            }
        } else if self.hi <= 0.0 {
            Self {
                lo: mul_down(self.hi, self.hi),
                hi: mul_up(self.lo, self.lo),
            }
        } else {
            let m = self.lo.abs().max(self.hi);
            Self {
                lo: 0.0,
                hi: mul_up(m, m),
            }
        }
    }

    /// Square root of the non-negative part.
    pub fn sqrt(self) -> Self {
        Self {
            lo: sqrt_down(self.lo.max(0.0)),
            hi: sqrt_up(self.hi.max(0.0)),
        }
    }

    /// Natural logarithm; `lo` must be positive.
    pub fn ln(self) -> Self {
        debug_assert!(self.lo > 0.0, "ln of non-positive interval");
        Self {
            lo: ln_down(self.lo),
            hi: ln_up(self.hi),
        }
    }

    pub fn exp(self) -> Self {
        Self {
            lo: exp_down(self.lo),
            hi: exp_up(self.hi),
        }
    }

    pub fn max(self, other: Self) -> Self {
        Self {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(self, other: Self) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// Intersection of two enclosures of the same quantity.
    pub fn meet(self, other: Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn scale(self, k: f64) -> Self {
        self * Self::point(k)
    }

    pub fn half(self) -> Self {
        // exact barring underflow
        Self {
            lo: self.lo * 0.5,
            hi: self.hi * 0.5,
        }
    }
}

impl From<f64> for ValueInterval {
    fn from(x: f64) -> Self {
        Self::point(x)
    }
}

impl fmt::Display for ValueInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for ValueInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for ValueInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ValueInterval {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for ValueInterval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.lo >= 0.0 && rhs.lo >= 0.0 {
            return Self {
                lo: mul_down(self.lo, rhs.lo),
                hi: mul_up(self.hi, rhs.hi),
            };
        }
        let cands = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in cands {
            lo = lo.min(mul_down(a, b));
            hi = hi.max(mul_up(a, b));
        }
        Self { lo, hi }
    }
}

impl Div for ValueInterval {
    type Output = Self;
    /// The divisor must not contain zero.
    fn div(self, rhs: Self) -> Self {
        debug_assert!(
            rhs.lo > 0.0 || rhs.hi < 0.0,
            "division by interval containing 0"
        );
        if self.lo >= 0.0 && rhs.lo > 0.0 {
            return Self {
                lo: div_down(self.lo, rhs.hi),
                hi: div_up(self.hi, rhs.lo),
            };
        }
        let cands = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in cands {
            lo = lo.min(div_down(a, b));
            hi = hi.max(div_up(a, b));
        }
        Self { lo, hi }
    }
}

/// Certified enclosure of a Teichmüller distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceInterval {
    pub lo: f64,
    pub hi: f64,
}

impl DistanceInterval {
    /// Pairs a certified lower and upper bound; `lo > hi + tol` is a bug in one
    /// of the two bounds and is reported rather than repaired.
    pub fn from_bounds(lo: f64, hi: f64, tol: f64) -> Result<Self, IntervalError> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(IntervalError::NonFinite);
        }
        if lo > hi + tol {
            return Err(IntervalError::Certification { lo, hi, tol });
        }
        let lo = lo.max(0.0);
        Ok(Self {
            lo: lo.min(hi),
            hi: hi.max(lo),
        })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains_within(&self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }

    pub fn as_value(&self) -> ValueInterval {
        ValueInterval {
            lo: self.lo,
            hi: self.hi,
        }
    }
}
