//! Floating-point backends for the numeric integrator.

use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_traits::{Float, FloatConst, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

use super::ChenError;
use crate::linalg::Rational;

/// Scalar type the integrator runs in.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {
    /// Mantissa bits carried by the type.
    const BITS: u32;

    fn of_f64(x: f64) -> Self;

    fn of_rational(q: &Rational) -> Self;

    fn lossy_f64(self) -> f64;

    /// Reciprocal correct to the working precision.
    fn inv(self) -> Self;

    /// Decimal rendering with every significant digit the type carries.
    fn render(self) -> String;
}

impl Real for f64 {
    const BITS: u32 = 53;

    fn of_f64(x: f64) -> Self {
        x
    }

    fn of_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn lossy_f64(self) -> f64 {
        self
    }

    fn inv(self) -> Self {
        1.0 / self
    }

    fn render(self) -> String {
        format!("{:.16e}", self)
    }
}

impl Real for TwoFloat {
    const BITS: u32 = 106;

    fn of_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }

    fn of_rational(q: &Rational) -> Self {
        let hi = q.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return TwoFloat::from(hi);
        }
        let rest = q - Rational::from_float(hi).unwrap_or_else(Rational::zero);
        let lo = rest.to_f64().unwrap_or(0.0);
        TwoFloat::new_add(hi, lo)
    }

    fn lossy_f64(self) -> f64 {
        self.hi() + self.lo()
    }

    fn inv(self) -> Self {
        // one Newton step on the library quotient
        let one = TwoFloat::from(1.0);
        let q = one / self;
        q + q * (one - q * self)
    }

    fn render(self) -> String {
        if !self.hi().is_finite() {
            return format!("{}", self.hi());
        }
        let exact = Rational::from_float(self.hi()).unwrap_or_else(Rational::zero)
            + Rational::from_float(self.lo()).unwrap_or_else(Rational::zero);
        scientific(&exact, 32)
    }
}

/// `d.ddd…e±x` with `digits` significant digits, rounded half away from zero.
pub fn scientific(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return format!("{:.*}e0", digits.saturating_sub(1), 0.0);
    }
    let negative = q.is_negative();
    let q = q.abs();
    let mut exponent = q.to_f64().map(|x| x.log10().floor() as i64).unwrap_or(0);
    let ten = BigInt::from(10u32);
    let scaled = |e: i64| -> BigInt {
        let shift = digits as i64 - 1 - e;
        let v = if shift >= 0 {
            &q * Rational::from_integer(num_traits::pow(ten.clone(), shift as usize))
        } else {
            &q / Rational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
        };
        (v.numer() * 2 + v.denom()) / (v.denom() * 2)
    };
    let lower = num_traits::pow(ten.clone(), digits - 1);
    let upper = num_traits::pow(ten.clone(), digits);
    let mut m = scaled(exponent);
    for _ in 0..4 {
        if m >= upper {
            exponent += 1;
        } else if m < lower {
            exponent -= 1;
        } else {
            break;
        }
        m = scaled(exponent);
    }
    let (_, text) = m.to_radix_be(10);
    let text: String = text.iter().map(|d| char::from(b'0' + d)).collect();
    let sign = if negative && m.sign() != Sign::NoSign { "-" } else { "" };
    let (head, tail) = text.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exponent}")
    } else {
        format!("{sign}{head}.{tail}e{exponent}")
    }
}

/// Floating-point backend selected from a requested mantissa width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    DoubleDouble,
}

impl Precision {
    pub fn from_bits(bits: u32) -> Result<Self, ChenError> {
        match bits {
            1..=53 => Ok(Precision::Double),
            54..=106 => Ok(Precision::DoubleDouble),
            _ => Err(ChenError::UnsupportedPrecision(bits)),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            Precision::Double => <f64 as Real>::BITS,
            Precision::DoubleDouble => <TwoFloat as Real>::BITS,
        }
    }
}
