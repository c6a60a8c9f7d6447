//! Scalar values that are exact rationals for as long as possible.
//!
//! The `Approx` variant appears only after an operation with no rational
//! result (fractional powers). Approximate values are dyadic rationals at
//! 128 fractional bits, so mixed comparisons and arithmetic are still exact
//! over the stored values; exactness is only a statement about the distance
//! to the ideal real number.

use num_traits::Signed;

use super::fixed::{Fixed, FixedError, Rounding, rat_pow_exact};
use super::rat::{Rat, fmt_decimal, fmt_rat, rat_to_f64};

#[derive(Clone, PartialEq, Eq)]
pub enum RealScalar {
    Exact(Rat),
    Approx(Fixed),
}

impl RealScalar {
    pub fn zero() -> Self {
        RealScalar::Exact(Rat::from_integer(0.into()))
    }

    pub fn one() -> Self {
        RealScalar::Exact(Rat::from_integer(1.into()))
    }

    pub fn from_int(v: i64) -> Self {
        RealScalar::Exact(Rat::from_integer(v.into()))
    }

    pub fn exact(r: Rat) -> Self {
        RealScalar::Exact(r)
    }

    pub fn approx(f: Fixed) -> Self {
        RealScalar::Approx(f)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealScalar::Exact(_))
    }

    /// The stored value as a rational (dyadic for `Approx`).
    pub fn to_rat(&self) -> Rat {
        match self {
            RealScalar::Exact(r) => r.clone(),
            RealScalar::Approx(f) => f.to_rat(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealScalar::Exact(r) => rat_to_f64(r),
            RealScalar::Approx(f) => f.to_f64(),
        }
    }

    fn tagged(value: Rat, exact: bool) -> RealScalar {
        if exact {
            RealScalar::Exact(value)
        } else {
            RealScalar::Approx(Fixed::from_rat(&value, Rounding::Nearest))
        }
    }

    fn binop(&self, rhs: &RealScalar, f: impl FnOnce(Rat, Rat) -> Rat) -> RealScalar {
        Self::tagged(
            f(self.to_rat(), rhs.to_rat()),
            self.is_exact() && rhs.is_exact(),
        )
    }

    pub fn add(&self, rhs: &RealScalar) -> RealScalar {
        self.binop(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RealScalar) -> RealScalar {
        self.binop(rhs, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &RealScalar) -> RealScalar {
        self.binop(rhs, |a, b| a * b)
    }

    /// `None` when `rhs` is zero.
    pub fn div(&self, rhs: &RealScalar) -> Option<RealScalar> {
        if rhs.to_rat().numer().sign() == num_bigint::Sign::NoSign {
            return None;
        }
        Some(self.binop(rhs, |a, b| a / b))
    }

    pub fn neg(&self) -> RealScalar {
        match self {
            RealScalar::Exact(r) => RealScalar::Exact(-r.clone()),
            RealScalar::Approx(f) => RealScalar::Approx(f.neg()),
        }
    }

    pub fn abs(&self) -> RealScalar {
        match self {
            RealScalar::Exact(r) => RealScalar::Exact(r.abs()),
            RealScalar::Approx(f) => RealScalar::Approx(f.abs()),
        }
    }

    pub fn scale(&self, k: &Rat) -> RealScalar {
        self.binop(&RealScalar::Exact(k.clone()), |a, b| a * b)
    }

    pub fn add_rat(&self, k: &Rat) -> RealScalar {
        self.binop(&RealScalar::Exact(k.clone()), |a, b| a + b)
    }

    pub fn min(&self, rhs: &RealScalar) -> RealScalar {
        if self.to_rat() <= rhs.to_rat() {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    pub fn max(&self, rhs: &RealScalar) -> RealScalar {
        if self.to_rat() >= rhs.to_rat() {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        self.to_rat().is_negative()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RealScalar::Exact(r) => r.numer().sign() == num_bigint::Sign::NoSign,
            RealScalar::Approx(f) => f.is_zero(),
        }
    }

    /// `self^expo` for positive rational exponents; exact whenever the power
    /// is rational.
    pub fn pow(&self, expo: &Rat) -> Result<RealScalar, FixedError> {
        match self {
            RealScalar::Exact(r) => {
                if let Some(exact) = rat_pow_exact(r, expo) {
                    return Ok(RealScalar::Exact(exact));
                }
                Ok(RealScalar::Approx(Fixed::pow_rat(r, expo, Rounding::Nearest)?))
            }
            RealScalar::Approx(f) => Ok(RealScalar::Approx(Fixed::pow_fixed(
                f,
                expo,
                Rounding::Nearest,
            )?)),
        }
    }

    /// Directed power used by enclosure code.
    pub fn pow_dir(&self, expo: &Rat, dir: Rounding) -> Result<RealScalar, FixedError> {
        match self {
            RealScalar::Exact(r) => {
                if let Some(exact) = rat_pow_exact(r, expo) {
                    return Ok(RealScalar::Exact(exact));
                }
                Ok(RealScalar::Approx(Fixed::pow_rat(r, expo, dir)?))
            }
            RealScalar::Approx(f) => Ok(RealScalar::Approx(Fixed::pow_fixed(f, expo, dir)?)),
        }
    }

    /// `|self - rhs| <= tol` over the stored values.
    pub fn eq_within(&self, rhs: &RealScalar, tol: &Rat) -> bool {
        (self.to_rat() - rhs.to_rat()).abs() <= *tol
    }
}

impl PartialOrd for RealScalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealScalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (RealScalar::Exact(a), RealScalar::Exact(b)) => a.cmp(b),
            _ => self.to_rat().cmp(&other.to_rat()),
        }
    }
}

impl std::fmt::Display for RealScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealScalar::Exact(r) => write!(f, "{}", fmt_rat(r)),
            RealScalar::Approx(x) => write!(f, "{}", fmt_decimal(&x.to_rat(), 12)),
        }
    }
}

impl std::fmt::Debug for RealScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealScalar::Exact(r) => write!(f, "Exact({})", fmt_rat(r)),
            RealScalar::Approx(x) => write!(f, "Approx({})", x.to_f64()),
        }
    }
}

impl From<Rat> for RealScalar {
    fn from(r: Rat) -> Self {
        RealScalar::Exact(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::rat::{rat, rat_int};

    #[test]
    fn exactness_propagates() {
        let a = RealScalar::exact(rat(1, 3));
        let b = RealScalar::exact(rat(1, 6));
        assert!(a.add(&b).is_exact());
        assert_eq!(a.add(&b).to_rat(), rat(1, 2));
        let c = RealScalar::exact(rat_int(2)).pow(&rat(1, 2)).unwrap();
        assert!(!c.is_exact());
        assert!(!a.add(&c).is_exact());
    }

    #[test]
    fn exact_powers_stay_exact() {
        let four = RealScalar::from_int(4);
        let r = four.pow(&rat(1, 2)).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.to_rat(), rat_int(2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(RealScalar::exact(rat(43, 6)).to_string(), "43/6");
        let s = RealScalar::from_int(2).pow(&rat(1, 2)).unwrap().to_string();
        assert!(s.starts_with("1.41421356237"), "{s}");
    }

    #[test]
    fn ordering_is_exact_on_dyadics() {
        let sqrt2 = RealScalar::from_int(2).pow(&rat(1, 2)).unwrap();
        assert!(sqrt2 > RealScalar::exact(rat(14142, 10000)));
        assert!(sqrt2 < RealScalar::exact(rat(14143, 10000)));
    }
}
