use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rationals.
pub type Q = BigRational;

/// Coefficient field for the truncated series and echelon code.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn from_q(q: &Q) -> Self;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Field for Q {
    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }

    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Generalized binomial coefficient C(k, r) for any integer k.
pub fn binomial(k: i64, r: u32) -> Q {
    let mut acc = Q::one();
    for s in 0..r as i64 {
        acc = acc * q(k - s) / q(s + 1);
    }
    acc
}

/// Falling factorial k (k-1) ... (k-r+1).
pub fn falling(k: i64, r: u32) -> Q {
    let mut acc = Q::one();
    for s in 0..r as i64 {
        acc = acc * q(k - s);
    }
    acc
}

/// Exact text form "p" or "p/q".
pub fn q_str(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_for_negative_exponents() {
        assert_eq!(binomial(-1, 0), q(1));
        assert_eq!(binomial(-1, 1), q(-1));
        assert_eq!(binomial(-1, 2), q(1));
        assert_eq!(binomial(-2, 2), q(3));
        assert_eq!(binomial(3, 4), q(0));
        assert_eq!(binomial(5, 2), q(10));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_q("-3/6"), Some(qf(-1, 2)));
        assert_eq!(q_str(&qf(-1, 2)), "-1/2");
        assert_eq!(q_str(&q(7)), "7");
        assert_eq!(parse_q("1/0"), None);
    }
}
