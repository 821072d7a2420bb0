//! Enclosed scalar quantities and the interval arithmetic used to combine
//! them with outward rounding.

use core::ops::{Add, Div, Mul, Neg, Sub};

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::Serialize;

use crate::matrix::ComplexVector;

/// A closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Clamps the lower end at zero; for quantities known to be nonnegative.
    pub fn nonneg(self) -> Self {
        Self {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    pub fn sqr(self) -> Self {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.lo <= 0.0 && self.hi >= 0.0 {
            Self::new(0.0, a.max(b))
        } else {
            Self::new(a.min(b), a.max(b))
        }
    }

    /// Square root of the nonnegative part.
    pub fn sqrt(self) -> Self {
        Self::new(self.lo.max(0.0).sqrt(), self.hi.max(0.0).sqrt())
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Self::new(0.0, (-self.lo).max(self.hi))
        }
    }

    pub fn max(self, other: Self) -> Self {
        Self::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn powf(self, p: f64) -> Self {
        debug_assert!(p > 0.0);
        Self::new(self.lo.max(0.0).powf(p), self.hi.max(0.0).powf(p))
    }
}

impl Add for Interval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::new(lo, hi)
    }
}

impl Mul<f64> for Interval {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        if k >= 0.0 {
            Self::new(self.lo * k, self.hi * k)
        } else {
            Self::new(self.hi * k, self.lo * k)
        }
    }
}

/// Division by an interval that must lie strictly on one side of zero.
impl Div for Interval {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        debug_assert!(o.lo > 0.0 || o.hi < 0.0, "division by interval containing 0");
        self * Self::new(1.0 / o.hi, 1.0 / o.lo)
    }
}

/// A computed scalar with an enclosing interval and an optional witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedValue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Angle attaining the optimum, when the value comes from a θ-scan.
    pub theta_star: Option<f64>,
    /// Unit vector attaining the optimum.
    pub witness: Option<ComplexVector>,
}

impl CertifiedValue {
    pub fn exact(x: f64) -> Self {
        Self {
            value: x,
            lower: x,
            upper: x,
            theta_star: None,
            witness: None,
        }
    }

    pub fn enclosed(value: f64, lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= value && value <= upper, "{lower} <= {value} <= {upper}");
        Self {
            value,
            lower,
            upper,
            theta_star: None,
            witness: None,
        }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lower, self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_ops_are_outward() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(-1.0, 3.0);
        assert_eq!(a + b, Interval::new(0.0, 5.0));
        assert_eq!(a - b, Interval::new(-2.0, 3.0));
        assert_eq!(a * b, Interval::new(-2.0, 6.0));
        assert_eq!(b.sqr(), Interval::new(0.0, 9.0));
        assert_eq!(a / Interval::new(2.0, 4.0), Interval::new(0.25, 1.0));
        assert_eq!(b.abs(), Interval::new(0.0, 3.0));
        assert_eq!(Interval::new(-4.0, 9.0).sqrt(), Interval::new(0.0, 3.0));
    }
}
