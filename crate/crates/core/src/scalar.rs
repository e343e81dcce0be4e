//! Scalar abstraction shared by the growth calculus and the doubling
//! parameters.
//!
//! Exact rationals and IEEE floats both implement [`Scalar`]. Code written
//! against the trait decides strict inequalities exactly when instantiated
//! with a rational type, and approximately with a float.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive {
    /// `true` for exact number systems.
    const EXACT: bool;

    /// `num / den` in this scalar type. `den` must be non-zero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Square root when it exists in the type; floats always have one for
    /// non-negative inputs, rationals only for perfect squares.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Equality up to the representation error of the type.
    fn close_to(&self, other: &Self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn sqrt_exact(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }

            fn close_to(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= $tol * scale
            }
        }
    };
}

float_scalar!(f32, 1e-5);
float_scalar!(f64, 1e-12);

fn exact_sqrt_i64(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

fn exact_sqrt_big(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        let n = exact_sqrt_i64(*self.numer())?;
        let d = exact_sqrt_i64(*self.denom())?;
        Some(Ratio::new(n, d))
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn sqrt_exact(&self) -> Option<Self> {
        let n = exact_sqrt_big(self.numer())?;
        let d = exact_sqrt_big(self.denom())?;
        Some(BigRational::new(n, d))
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

/// Parse `"a"`, `"a/b"` or a decimal literal into a scalar.
pub fn parse_scalar<T: Scalar>(text: &str) -> Option<T> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(T::from_ratio(n, d));
    }
    if let Ok(n) = text.parse::<i64>() {
        return Some(T::from_int(n));
    }
    // decimal literal: exact for rationals via the digit expansion
    let (int_part, frac_part) = text.split_once('.')?;
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches('-'), frac_part);
    let num: i64 = digits.parse().ok()?;
    let den = 10i64.checked_pow(frac_part.len() as u32)?;
    Some(T::from_ratio(if negative { -num } else { num }, den))
}
