//! Coefficient fields shared by the series and expansion code.
//!
//! Everything that is rational by construction (Taylor coefficients of the
//! radial functions, Gaussian moments divided by a power of pi, weight
//! arithmetic) can run either in `f64` or exactly in [`BigRational`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A coefficient field: `f64` for float mode, `BigRational` for exact mode.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_rational(q: &BigRational) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Converts a big rational to the nearest-ish `f64`, robust to huge numerators
/// and denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    let n = q.numer();
    let d = q.denom();
    let sn = (n.bits() as i64 - 60).max(0);
    let sd = (d.bits() as i64 - 60).max(0);
    let nf = (n >> sn as usize).to_f64().unwrap_or(0.0);
    let df = (d >> sd as usize).to_f64().unwrap_or(1.0);
    let e = sn - sd;
    // split the exponent so neither factor over/underflows on its own
    let half = (e / 2) as i32;
    nf / df * 2f64.powi(half) * 2f64.powi(e as i32 - half)
}

/// An element of the `S`-span of `{1, γ, ln 2}`.
///
/// Log-Gaussian moments and the `λ = 1/(4t)` change of variables only ever
/// produce these three transcendental directions, so exact coefficients stay
/// exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Lin3<S> {
    pub one: S,
    pub euler: S,
    pub ln2: S,
}

impl<S: Scalar> Lin3<S> {
    pub fn zero() -> Self {
        Self {
            one: S::zero(),
            euler: S::zero(),
            ln2: S::zero(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self {
            one: c,
            euler: S::zero(),
            ln2: S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.euler.is_zero() && self.ln2.is_zero()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            one: self.one.clone() * c.clone(),
            euler: self.euler.clone() * c.clone(),
            ln2: self.ln2.clone() * c.clone(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        self.one = self.one.clone() + other.one.clone() * c.clone();
        self.euler = self.euler.clone() + other.euler.clone() * c.clone();
        self.ln2 = self.ln2.clone() + other.ln2.clone() * c.clone();
    }

    pub fn to_f64(&self) -> f64 {
        self.one.to_f64() + self.euler.to_f64() * EULER_GAMMA + self.ln2.to_f64() * std::f64::consts::LN_2
    }
}

impl<S: Scalar> Add for Lin3<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            one: self.one + rhs.one,
            euler: self.euler + rhs.euler,
            ln2: self.ln2 + rhs.ln2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10).pow(400);
        let q = BigRational::new(big.clone() * BigInt::from(3), big * BigInt::from(4));
        assert_eq!(rational_to_f64(&q), 0.75);
        let q = BigRational::new(BigInt::from(1), BigInt::from(10).pow(400));
        assert_eq!(rational_to_f64(&q), 0.0);
        let q = BigRational::new(BigInt::from(10).pow(300), BigInt::from(7));
        assert!((rational_to_f64(&q) / 1.428_571_428_571_428_6e299 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lin3_evaluates() {
        let v = Lin3::<f64> {
            one: 1.0,
            euler: 2.0,
            ln2: -1.0,
        };
        assert!((v.to_f64() - (1.0 + 2.0 * EULER_GAMMA - std::f64::consts::LN_2)).abs() < 1e-15);
    }
}
