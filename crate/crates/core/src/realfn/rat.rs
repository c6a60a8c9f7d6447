//! Exact rational scalars and parsing/formatting helpers.
//!
//! `Rat` is an arbitrary-precision rational, always stored reduced with a
//! positive denominator (both invariants are maintained by `BigRational`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rat = BigRational;

/// `p/q` from machine integers. Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer rational.
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn rat_big(p: BigInt) -> Rat {
    Rat::from_integer(p)
}

/// Smallest integer `>= r`.
pub fn ceil_big(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

/// Largest integer `<= r`.
pub fn floor_big(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a rational number: {0:?}")]
pub struct RatParseError(pub String);

/// Accepts `p/q`, `p`, and plain decimals such as `-3.25`.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    let err = || RatParseError(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let p = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let int = if int.is_empty() || int == "-" || int == "+" {
            format!("{int}0")
        } else {
            int.to_string()
        };
        let whole = BigInt::from_str(&int).map_err(|_| err())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigInt::from_str(frac).map_err(|_| err())?;
        let signed_frac = if whole.is_negative() || int.starts_with('-') {
            -frac_part
        } else {
            frac_part
        };
        return Ok(Rat::new(whole * &scale + signed_frac, scale));
    }
    BigInt::from_str(s).map(Rat::from_integer).map_err(|_| err())
}

/// Canonical text form: `p` when integral, `p/q` otherwise (always reduced).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed-point decimal with `digits` fractional digits, rounded half away
/// from zero.
pub fn fmt_decimal(r: &Rat, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * rat_big(scale.clone());
    let half = rat(1, 2);
    let rounded = if scaled.is_negative() {
        ceil_big(&(scaled - half))
    } else {
        floor_big(&(scaled + half))
    };
    let neg = rounded.is_negative();
    let mag = rounded.abs().to_string();
    let mag = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int, frac) = mag.split_at(mag.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Lossy conversion for reports and plots.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("5").unwrap(), rat_int(5));
        assert_eq!(parse_rat("-7/14").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("2.50").unwrap(), rat(5, 2));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat(".5").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(fmt_rat(&rat(43, 6)), "43/6");
        assert_eq!(fmt_rat(&rat(8, 4)), "2");
        assert_eq!(fmt_rat(&rat(-3, 9)), "-1/3");
    }

    #[test]
    fn decimal_format() {
        assert_eq!(fmt_decimal(&rat(1, 2), 3), "0.500");
        assert_eq!(fmt_decimal(&rat(-1, 3), 6), "-0.333333");
        assert_eq!(fmt_decimal(&rat(2, 3), 6), "0.666667");
        assert_eq!(fmt_decimal(&rat_int(12), 2), "12.00");
    }

    #[test]
    fn ceil_floor() {
        assert_eq!(ceil_big(&rat(7, 2)), BigInt::from(4));
        assert_eq!(ceil_big(&rat(-7, 2)), BigInt::from(-3));
        assert_eq!(floor_big(&rat(7, 2)), BigInt::from(3));
        assert_eq!(ceil_big(&rat_int(3)), BigInt::from(3));
    }
}
