//! Koszul sign rules.
//!
//! Every sign in the crate comes from one of these functions: swapping two
//! homogeneous elements of degrees `p` and `q` costs `(-1)^(pq)`, and moving
//! an operator of odd degree past an element of degree `p` costs `(-1)^p`.
//! Degrees are signed because bar letters sit in shifted degree `|a| - 1`.

use crate::linalg::Rational;
use num_traits::{One, Zero};

/// `(-1)^n`.
pub fn parity(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign of `a ⊗ b ↦ b ⊗ a` for homogeneous `a`, `b`: `(-1)^(|a||b|)`.
pub fn koszul(deg_a: i64, deg_b: i64) -> i64 {
    parity(deg_a * deg_b)
}

/// Shifted degree of a bar letter of algebra degree `deg`.
pub fn shifted(deg: i64) -> i64 {
    deg - 1
}

pub fn as_rational(sign: i64) -> Rational {
    match sign {
        1 => Rational::one(),
        -1 => -Rational::one(),
        0 => Rational::zero(),
        _ => panic!("not a sign: {sign}"),
    }
}
