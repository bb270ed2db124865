//! Arbitrary-precision rationals.
//!
//! `Rational` is `num::BigRational`, which already maintains the invariants
//! we need: gcd(|numerator|, denominator) = 1, denominator > 0, zero is 0/1.
//! This module adds the handful of constructors and the "p/q" text form used
//! throughout serialization.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

pub type Rational = num::BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand constructor for small integers.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// n! as a rational, for the S-expansion coefficients.
pub fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// The weight 1/(2^(2h) (2h+1)!) attached to an edge of genus h; these are
/// the even Taylor coefficients of (e^(u/2) - e^(-u/2))/u.
pub fn s_coefficient(h: u64) -> Rational {
    let two_pow = Rational::from_integer(BigInt::from(2u32).pow(2 * h as u32));
    (two_pow * factorial(2 * h + 1)).recip()
}

/// Parse the canonical "p/q" (or plain "p") form. Accepts a leading sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

/// Canonical text form: "p" for integers, "p/q" otherwise; sign on the front.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// gcd over the positive rationals: gcd of numerators over lcm of
/// denominators. Used for polynomial content.
pub fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = num::integer::gcd(a.numer().clone(), b.numer().clone());
    let den = num::integer::lcm(a.denom().clone(), b.denom().clone());
    Rational::new(num, den).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_coefficients_match_the_expansion() {
        // S(u) = 1 + u^2/24 + u^4/1920 + ...
        assert_eq!(s_coefficient(0), int(1));
        assert_eq!(s_coefficient(1), rat(1, 24));
        assert_eq!(s_coefficient(2), rat(1, 1920));
    }

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["0", "5", "-3", "7/3", "-105/2048"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(render_rational(&r), s);
        }
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn content_gcd() {
        assert_eq!(rational_gcd(&rat(4, 3), &rat(2, 9)), rat(2, 9));
        assert_eq!(rational_gcd(&rat(0, 1), &rat(-5, 2)), rat(5, 2));
    }
}
