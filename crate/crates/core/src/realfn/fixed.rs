//! Fixed-point arithmetic with 128 fractional bits.
//!
//! Used wherever an expression leaves the exact rational fragment (powers
//! with fractional exponents). Values are dyadic rationals `m / 2^128`, so
//! comparisons against exact rationals stay exact; only fresh rounding steps
//! lose information, each by at most a couple of units in the last place.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use super::rat::{Rat, rat_big};

/// Fractional bits carried by every [`Fixed`] value.
pub const FRAC_BITS: u64 = 128;

/// Hard cap on numerator/denominator of exponents fed to the power routines.
/// Roots of degree beyond this are not representable at fixed precision in
/// reasonable time or space.
pub const POW_CAP: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed {
    m: BigInt, // value = m / 2^FRAC_BITS
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixedError {
    #[error("exponent {0} exceeds the supported cap {POW_CAP}")]
    ExponentTooLarge(String),
    #[error("power of a non-positive base")]
    NonPositiveBase,
}

fn shr_floor(v: BigInt, bits: u64) -> BigInt {
    // BigInt shr rounds toward negative infinity, which is floor.
    v >> bits
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed { m: BigInt::zero() }
    }

    pub fn from_mantissa(m: BigInt) -> Self {
        Fixed { m }
    }

    pub fn from_int(v: i64) -> Self {
        Fixed {
            m: BigInt::from(v) << FRAC_BITS,
        }
    }

    pub fn from_rat(r: &Rat, dir: Rounding) -> Self {
        let scaled_num = r.numer() << FRAC_BITS;
        let m = match dir {
            Rounding::Down => scaled_num.div_floor(r.denom()),
            Rounding::Up => scaled_num.div_ceil(r.denom()),
            Rounding::Nearest => {
                ((scaled_num << 1u8) + r.denom()).div_floor(&(r.denom() << 1u8))
            }
        };
        Fixed { m }
    }

    /// Exact dyadic value of this fixed-point number.
    pub fn to_rat(&self) -> Rat {
        Rat::new(self.m.clone(), BigInt::from(1u8) << FRAC_BITS)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.m.bits();
        if bits <= 1000 {
            return self.m.to_f64().unwrap_or(f64::NAN) / 2f64.powi(FRAC_BITS as i32);
        }
        let shift = bits - 64;
        let head = (&self.m >> shift).to_f64().unwrap_or(f64::NAN);
        head * 2f64.powi(shift as i32 - FRAC_BITS as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed { m: &self.m + &o.m }
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed { m: &self.m - &o.m }
    }

    pub fn neg(&self) -> Fixed {
        Fixed { m: -self.m.clone() }
    }

    pub fn abs(&self) -> Fixed {
        Fixed { m: self.m.abs() }
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        let prod = &self.m * &o.m;
        Fixed {
            m: shr_floor(prod + (BigInt::from(1u8) << (FRAC_BITS - 1)), FRAC_BITS),
        }
    }

    pub fn mul_rat(&self, r: &Rat, dir: Rounding) -> Fixed {
        let num = &self.m * r.numer();
        let m = match dir {
            Rounding::Down => num.div_floor(r.denom()),
            Rounding::Up => num.div_ceil(r.denom()),
            Rounding::Nearest => ((num << 1u8) + r.denom()).div_floor(&(r.denom() << 1u8)),
        };
        Fixed { m }
    }

    pub fn div(&self, o: &Fixed, dir: Rounding) -> Fixed {
        let num = &self.m << FRAC_BITS;
        let m = match dir {
            Rounding::Down => num.div_floor(&o.m),
            Rounding::Up => num.div_ceil(&o.m),
            Rounding::Nearest => ((num << 1u8) + &o.m).div_floor(&(&o.m << 1u8)),
        };
        Fixed { m }
    }

    pub fn min(self, o: Fixed) -> Fixed {
        if self.m <= o.m { self } else { o }
    }

    pub fn max(self, o: Fixed) -> Fixed {
        if self.m >= o.m { self } else { o }
    }

    /// `base^expo` for a positive rational base and positive rational
    /// exponent, rounded in the requested direction. The result is within
    /// 2 ulp of the true value on the `Down` side and is a guaranteed upper
    /// bound on the `Up` side.
    pub fn pow_rat(base: &Rat, expo: &Rat, dir: Rounding) -> Result<Fixed, FixedError> {
        if !base.is_positive() {
            return Err(FixedError::NonPositiveBase);
        }
        let (u, w) = checked_exponent(expo)?;
        let powered = rat_pow_int(base, u);
        let scaled = (powered.numer() << (FRAC_BITS * w)).div_floor(powered.denom());
        Ok(rooted(scaled, w, dir))
    }

    /// `base^expo` for a nonnegative fixed-point base.
    pub fn pow_fixed(base: &Fixed, expo: &Rat, dir: Rounding) -> Result<Fixed, FixedError> {
        if base.m.is_negative() {
            return Err(FixedError::NonPositiveBase);
        }
        if base.m.is_zero() {
            return Ok(Fixed::zero());
        }
        let (u, w) = checked_exponent(expo)?;
        let mut n = num_traits::pow::pow(base.m.clone(), u as usize);
        if w >= u {
            n <<= FRAC_BITS * (w - u);
        } else {
            n = shr_floor(n, FRAC_BITS * (u - w));
        }
        Ok(rooted(n, w, dir))
    }
}

impl std::fmt::Debug for Fixed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fixed({})", self.to_f64())
    }
}

fn checked_exponent(expo: &Rat) -> Result<(u64, u64), FixedError> {
    if !expo.is_positive() {
        return Err(FixedError::ExponentTooLarge(expo.to_string()));
    }
    let u = expo.numer().to_u64();
    let w = expo.denom().to_u64();
    match (u, w) {
        (Some(u), Some(w)) if u <= POW_CAP && w <= POW_CAP => Ok((u, w)),
        _ => Err(FixedError::ExponentTooLarge(expo.to_string())),
    }
}

fn rat_pow_int(base: &Rat, u: u64) -> Rat {
    Rat::new_raw(
        num_traits::pow::pow(base.numer().clone(), u as usize),
        num_traits::pow::pow(base.denom().clone(), u as usize),
    )
}

/// Directed `scaled^(1/w)` on a nonnegative integer already carrying the
/// target fixed-point scale.
fn rooted(scaled: BigInt, w: u64, dir: Rounding) -> Fixed {
    debug_assert!(!scaled.is_negative());
    let down = scaled.nth_root(w as u32);
    let m = match dir {
        Rounding::Down => down,
        Rounding::Up | Rounding::Nearest => {
            if num_traits::pow::pow(down.clone(), w as usize) == scaled {
                down
            } else if dir == Rounding::Up {
                down + 2
            } else {
                down + 1
            }
        }
    };
    Fixed { m }
}

/// Exact value of `base^expo` when it happens to be rational
/// (both sides of the reduced base are perfect `w`-th powers).
pub fn rat_pow_exact(base: &Rat, expo: &Rat) -> Option<Rat> {
    if !base.is_positive() || !expo.is_positive() {
        return None;
    }
    let (u, w) = checked_exponent(expo).ok()?;
    let powered = rat_pow_int(base, u);
    let powered = Rat::new(powered.numer().clone(), powered.denom().clone());
    let rp = powered.numer().nth_root(w as u32);
    let rq = powered.denom().nth_root(w as u32);
    if num_traits::pow::pow(rp.clone(), w as usize) == *powered.numer()
        && num_traits::pow::pow(rq.clone(), w as usize) == *powered.denom()
    {
        Some(Rat::new(rp, rq))
    } else {
        None
    }
}

/// Smallest integer `m` with `m >= base^expo`, computed exactly.
/// `base` must be positive.
pub fn pow_ceil_int(base: &Rat, expo: &Rat) -> Result<BigInt, FixedError> {
    if !base.is_positive() {
        return Err(FixedError::NonPositiveBase);
    }
    let (u, w) = checked_exponent(expo)?;
    let powered = rat_pow_int(base, u);
    // m >= (U/V)^(1/w)  <=>  m^w >= U/V  <=>  m^w >= ceil(U/V) for integer m^w.
    let c = powered.numer().div_ceil(powered.denom());
    if c.is_negative() || c.is_zero() {
        return Ok(BigInt::zero());
    }
    let r = c.nth_root(w as u32);
    if num_traits::pow::pow(r.clone(), w as usize) >= c {
        Ok(r)
    } else {
        Ok(r + 1)
    }
}

/// Convenience: exact rational square root check, else fixed-point.
pub fn sqrt_fixed(v: &Rat, dir: Rounding) -> Result<Fixed, FixedError> {
    Fixed::pow_rat(v, &Rat::new(BigInt::from(1u8), BigInt::from(2u8)), dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::rat::{rat, rat_int};

    #[test]
    fn roundtrip_rational() {
        let r = rat(43, 6);
        let f = Fixed::from_rat(&r, Rounding::Nearest);
        let back = f.to_rat();
        let err = (back - r).abs();
        assert!(err < rat_big(BigInt::from(1u8)) / rat_big(BigInt::from(1u8) << 127));
    }

    #[test]
    fn directed_square_roots() {
        let lo = Fixed::pow_rat(&rat_int(2), &rat(1, 2), Rounding::Down).unwrap();
        let hi = Fixed::pow_rat(&rat_int(2), &rat(1, 2), Rounding::Up).unwrap();
        assert!(lo <= hi);
        let lo2 = lo.mul(&lo).to_f64();
        let hi2 = hi.mul(&hi).to_f64();
        assert!(lo2 <= 2.0 && 2.0 <= hi2 + 1e-30);
        assert!((lo.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn exact_powers_detected() {
        assert_eq!(rat_pow_exact(&rat_int(4), &rat(1, 2)), Some(rat_int(2)));
        assert_eq!(rat_pow_exact(&rat(9, 16), &rat(1, 2)), Some(rat(3, 4)));
        assert_eq!(rat_pow_exact(&rat_int(2), &rat(1, 2)), None);
        assert_eq!(rat_pow_exact(&rat_int(8), &rat(2, 3)), Some(rat_int(4)));
    }

    #[test]
    fn pow_ceil_matches_closed_forms() {
        // 16^2 = 256
        assert_eq!(pow_ceil_int(&rat_int(16), &rat_int(2)).unwrap(), BigInt::from(256));
        // ceil(2^(3/2)) = ceil(2.828...) = 3
        assert_eq!(pow_ceil_int(&rat_int(2), &rat(3, 2)).unwrap(), BigInt::from(3));
        // ceil((1/4)^(1/2)) = ceil(0.5) = 1
        assert_eq!(pow_ceil_int(&rat(1, 4), &rat(1, 2)).unwrap(), BigInt::from(1));
        // ceil(8^(4/3)) = 16 exactly
        assert_eq!(pow_ceil_int(&rat_int(8), &rat(4, 3)).unwrap(), BigInt::from(16));
    }

    #[test]
    fn fixed_base_power() {
        let base = Fixed::from_rat(&rat_int(9), Rounding::Nearest);
        let r = Fixed::pow_fixed(&base, &rat(1, 2), Rounding::Down).unwrap();
        assert!((r.to_f64() - 3.0).abs() < 1e-30);
    }

    #[test]
    fn exponent_cap_enforced() {
        let huge = Rat::new(BigInt::from(1u8), BigInt::from(100_000u32));
        assert!(Fixed::pow_rat(&rat_int(2), &huge, Rounding::Down).is_err());
    }
}
