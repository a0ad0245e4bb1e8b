//! Parsing and printing of exact rationals.
//!
//! Accepted forms: `p`, `p/q` and finite decimals `i.f`, each with an
//! optional leading sign. Exponents and whitespace inside the number are
//! rejected.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::linalg::Rational;

/// Longest digit string accepted by [`parse_rational`].
pub const MAX_DIGITS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("rational literal longer than {MAX_DIGITS} digits")]
    TooLong,
}

fn digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if text.len() > MAX_DIGITS {
        return Err(ParseRationalError::TooLong);
    }
    let invalid = || ParseRationalError::Invalid(text.to_string());
    let (negative, body) = match text.as_bytes()[0] {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let n = digits(num).ok_or_else(invalid)?;
        let d = digits(den).ok_or_else(invalid)?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        Rational::new(n, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        let i = if int.is_empty() && !frac.is_empty() {
            BigInt::zero()
        } else {
            digits(int).ok_or_else(invalid)?
        };
        if frac.is_empty() {
            Rational::from_integer(i)
        } else {
            let f = digits(frac).ok_or_else(invalid)?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            Rational::new(i * &scale + f, scale)
        }
    } else {
        Rational::from_integer(digits(body).ok_or_else(invalid)?)
    };
    Ok(if negative { -value } else { value })
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
