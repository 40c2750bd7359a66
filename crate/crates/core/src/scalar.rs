//! Numeric abstraction shared by every analytic routine.
//!
//! All probability and expectation arithmetic in this crate is written against
//! [`Scalar`], which needs only field operations and an ordering. `f64` is the
//! working type; `f32` is supported for low-precision sweeps and [`BigRational`]
//! gives exact results on the families whose inputs are exact counts.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + NumAssign
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Absolute slack used by every condition check. Zero for exact types.
    fn tolerance() -> Self;

    /// `num / den`, exact where the type allows it.
    fn from_ratio(num: u64, den: u64) -> Self;

    fn from_rational(value: &BigRational) -> Self;

    fn from_count(count: u64) -> Self {
        Self::from_ratio(count, 1)
    }

    /// Lossy conversion for reporting and sampling.
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-10
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(value: &BigRational) -> Self {
        value.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn from_rational(value: &BigRational) -> Self {
        value.to_f32().unwrap_or(f32::NAN)
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }
}

/// Strictly above zero. `Signed::is_positive` on floats also accepts `+0.0`.
pub(crate) fn positive<T: Scalar>(x: &T) -> bool {
    *x > T::zero()
}

/// Strictly below zero.
pub(crate) fn negative<T: Scalar>(x: &T) -> bool {
    *x < T::zero()
}

/// `a >= b - tolerance`.
pub(crate) fn at_least<T: Scalar>(a: &T, b: &T) -> bool {
    a.clone() + T::tolerance() >= *b
}

/// `base^exp` by repeated squaring.
pub(crate) fn powu<T: Scalar>(base: &T, mut exp: u64) -> T {
    let mut acc = T::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= sq.clone();
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.clone() * sq;
        }
    }
    acc
}

/// `1 + x + ... + x^(n-1)`, evaluated without forming `1 - x^n`.
pub(crate) fn geometric_sum<T: Scalar>(x: &T, n: u64) -> T {
    if n == 0 {
        return T::zero();
    }
    if n == 1 {
        return T::one();
    }
    let half = n / 2;
    // S(2h) = S(h) (1 + x^h)
    let s_half = geometric_sum(x, half);
    let doubled = s_half.clone() * (T::one() + powu(x, half));
    if n.is_multiple_of(2) {
        doubled
    } else {
        doubled + powu(x, n - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powu_matches_powi() {
        for e in 0..20u64 {
            let v: f64 = powu(&0.93, e);
            assert!((v - 0.93f64.powi(e as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn geometric_sum_small_cases() {
        let x = BigRational::from_ratio(1, 3);
        for n in 0..12u64 {
            let mut expect = BigRational::from_integer(0.into());
            let mut term = BigRational::from_integer(1.into());
            for _ in 0..n {
                expect += term.clone();
                term *= x.clone();
            }
            assert_eq!(geometric_sum(&x, n), expect, "n={n}");
        }
    }

    #[test]
    fn exact_ratio_roundtrip() {
        let r = BigRational::from_ratio(3, 12);
        assert_eq!(r, BigRational::new(1.into(), 4.into()));
        assert_eq!(<f64 as Scalar>::from_rational(&r), 0.25);
    }
}
