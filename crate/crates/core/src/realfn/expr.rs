//! Expression trees for real-valued functions on the half-line.
//!
//! Atoms: constants, `tau(x) = x + 1`, fractional powers `tau^alpha` with
//! `0 < alpha < 1`, the canonical concave piecewise-linear function `eta_a`
//! of a strictly increasing sequence `a`, and finite piecewise-linear
//! functions. Nodes close the atoms under addition, rational scaling,
//! pointwise join/meet, and absolute value.
//!
//! Everything is immutable after construction and safe to share across
//! threads; the only interior state is memoization of `eta_a` prefix values,
//! which never changes an observable result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::{Arc, RwLock};

use super::curve::PlCurve;
use super::fixed::{FixedError, POW_CAP};
use super::rat::{Rat, rat_int};
use super::real::RealScalar;
use super::seq::{MATERIALIZE_CAP, Seq, SeqError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("tau_pow exponent must satisfy 0 < alpha < 1, got {0}")]
    AlphaOutOfRange(String),
    #[error("tau_pow exponent denominator exceeds {POW_CAP}")]
    AlphaTooFine,
    #[error("piecewise-linear breakpoints must start at 0 and increase strictly")]
    BadBreakpoints,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("function domain is the half-line; got negative input {0}")]
    Negative(String),
    #[error("eta prefix deeper than {cap} segments; value left desk scale")]
    EtaDepth { cap: u64 },
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Power(#[from] FixedError),
    #[error("expression contains tau_pow and is not piecewise linear")]
    NotPiecewiseLinear,
}

/// Finite piecewise-linear atom: breakpoints `0 = x_0 < x_1 < ... < x_k`
/// with values at breakpoints and a final slope beyond `x_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlSpec {
    xs: Vec<Rat>,
    ys: Vec<Rat>,
    final_slope: Rat,
}

impl PlSpec {
    pub fn new(points: Vec<(Rat, Rat)>, final_slope: Rat) -> Result<PlSpec, ExprError> {
        if points.is_empty() || !points[0].0.is_zero() {
            return Err(ExprError::BadBreakpoints);
        }
        if !points.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(ExprError::BadBreakpoints);
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(PlSpec { xs, ys, final_slope })
    }

    pub fn points(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn final_slope(&self) -> &Rat {
        &self.final_slope
    }

    pub fn last_breakpoint(&self) -> &Rat {
        self.xs.last().unwrap()
    }

    fn eval(&self, x: &Rat) -> Rat {
        let last = self.xs.len() - 1;
        if *x >= self.xs[last] {
            return &self.ys[last] + (x - &self.xs[last]) * &self.final_slope;
        }
        let i = match self.xs.binary_search_by(|p| p.cmp(x)) {
            Ok(i) => return self.ys[i].clone(),
            Err(i) => i - 1,
        };
        let t = (x - &self.xs[i]) / (&self.xs[i + 1] - &self.xs[i]);
        &self.ys[i] + (&self.ys[i + 1] - &self.ys[i]) * t
    }

    fn to_curve(&self, lo: &Rat, hi: &Rat) -> PlCurve {
        let mut xs = vec![lo.clone()];
        let mut ys = vec![self.eval(lo)];
        for x in &self.xs {
            if x > lo && x < hi {
                xs.push(x.clone());
                ys.push(self.eval(x));
            }
        }
        if hi > lo {
            xs.push(hi.clone());
            ys.push(self.eval(hi));
        }
        PlCurve::new(xs, ys)
    }

    /// Largest |slope| over `[lo, hi]`.
    fn max_abs_slope_on(&self, lo: &Rat, hi: &Rat) -> Rat {
        self.to_curve(lo, hi).max_abs_slope()
    }
}

/// Prefix values `eta_a(a_k)` accumulated over a shared lcm-style
/// denominator. Entries are unreduced `nums[k-1] / dens[k-1]`; keeping the
/// denominator divisible by every slope index avoids a gcd per step.
struct EtaPrefix {
    nums: Vec<BigInt>,
    dens: Vec<Arc<BigInt>>,
}

/// The `eta` atom: a sequence plus memoized prefix values.
#[derive(Clone)]
pub struct EtaFn {
    seq: Seq,
    prefix: Arc<RwLock<EtaPrefix>>,
}

impl EtaFn {
    pub fn new(seq: Seq) -> EtaFn {
        EtaFn {
            seq,
            prefix: Arc::new(RwLock::new(EtaPrefix { nums: Vec::new(), dens: Vec::new() })),
        }
    }

    pub fn seq(&self) -> &Seq {
        &self.seq
    }

    fn ensure_prefix(&self, k: u64) -> Result<(), EvalError> {
        if k > MATERIALIZE_CAP {
            return Err(EvalError::EtaDepth { cap: MATERIALIZE_CAP });
        }
        if self.prefix.read().unwrap().nums.len() as u64 >= k {
            return Ok(());
        }
        let mut p = self.prefix.write().unwrap();
        if p.nums.is_empty() {
            let a1 = self.seq.at(1)?;
            p.nums.push(a1 + 1);
            p.dens.push(Arc::new(BigInt::one()));
        }
        while (p.nums.len() as u64) < k {
            let i = p.nums.len(); // extending to entry for a_{i+1}
            let step_index = BigInt::from(i); // slope 1/i on [a_i, a_{i+1}]
            let a_i = self.seq.at(i as u64)?;
            let a_next = self.seq.at(i as u64 + 1)?;
            let delta = a_next - a_i;
            let den = p.dens[i - 1].clone();
            // factor = i / gcd(i, den): one big-mod-small, then machine gcd
            let rem = (&*den % &step_index).to_u64().unwrap_or(0);
            let g = if rem == 0 { i as u64 } else { (i as u64).gcd(&rem) };
            let factor = BigInt::from(i as u64 / g);
            let new_den = if factor.is_one() {
                den.clone()
            } else {
                Arc::new(&*den * &factor)
            };
            let scaled_unit = &*new_den / &step_index; // exact: i divides new_den
            let num = &p.nums[i - 1] * &factor + delta * scaled_unit;
            p.nums.push(num);
            p.dens.push(new_den);
        }
        Ok(())
    }

    /// `eta_a(a_k)` as an unreduced fraction.
    pub(crate) fn prefix_value(&self, k: u64) -> Result<(BigInt, BigInt), EvalError> {
        self.ensure_prefix(k)?;
        let p = self.prefix.read().unwrap();
        Ok((p.nums[k as usize - 1].clone(), (*p.dens[k as usize - 1]).clone()))
    }

    fn segment_of(&self, x: &Rat) -> Result<Option<u64>, EvalError> {
        // Slope is 1 on [0, a_2]; beyond that the segment index is the last
        // k with a_k <= x.
        match self.seq.at(2) {
            Ok(a2) => {
                if *x <= Rat::from_integer(a2) {
                    return Ok(None);
                }
            }
            Err(SeqError::OutOfRange { .. }) => {
                // Single-term sequence: the stage-1 function is tau itself.
                return Ok(None);
            }
            Err(e) => return Err(e.into()),
        }
        let (k, _) = self
            .seq
            .last_index_le(x)?
            .expect("x > a_2 implies a segment exists");
        Ok(Some(k))
    }

    /// Unreduced `(numerator, denominator)` of `eta_a(x)`; denominator > 0.
    pub(crate) fn eval_parts(&self, x: &Rat) -> Result<(BigInt, BigInt), EvalError> {
        match self.segment_of(x)? {
            None => Ok((x.numer() + x.denom(), x.denom().clone())),
            Some(k) => {
                let (num, den) = self.prefix_value(k)?;
                let a_k = self.seq.at(k)?;
                let kk = BigInt::from(k);
                // eta(x) = num/den + (x - a_k)/k
                let dx_num = x.numer() - a_k * x.denom();
                let out_den = &den * x.denom() * &kk;
                let out_num = num * x.denom() * kk + dx_num * den;
                Ok((out_num, out_den))
            }
        }
    }

    /// Reduced value of `eta_a(x)`.
    pub fn eval(&self, x: &Rat) -> Result<Rat, EvalError> {
        let (n, d) = self.eval_parts(x)?;
        Ok(Rat::new(n, d))
    }

    /// Sound lower/upper bounds even beyond the materialization cap, where
    /// the upper bound extends the deepest known segment's slope.
    pub(crate) fn eval_bounds(&self, x: &Rat) -> Result<(Rat, Rat), EvalError> {
        match self.eval(x) {
            Ok(v) => Ok((v.clone(), v)),
            Err(EvalError::EtaDepth { .. }) | Err(EvalError::Seq(SeqError::TooDeep { .. })) => {
                let k = MATERIALIZE_CAP.min(match self.seq.finite_len() {
                    Some(l) => l,
                    None => MATERIALIZE_CAP,
                });
                let (num, den) = self.prefix_value(k)?;
                let base = Rat::new(num, den);
                let a_k = Rat::from_integer(self.seq.at(k)?);
                let upper = &base + (x - a_k) / rat_int(k as i64);
                Ok((base, upper))
            }
            Err(e) => Err(e),
        }
    }

    /// Upper bound on the slope at and beyond `x` (also a bound on `[x, b]`
    /// for any `b > x` since slopes are nonincreasing).
    pub(crate) fn slope_at(&self, x: &Rat) -> Result<Rat, EvalError> {
        match self.segment_of(x) {
            Ok(None) => Ok(rat_int(1)),
            Ok(Some(k)) => Ok(Rat::new(BigInt::one(), BigInt::from(k))),
            Err(EvalError::Seq(SeqError::TooDeep { .. })) => Ok(rat_int(1)),
            Err(e) => Err(e),
        }
    }

    /// Curve restriction; nodes carry unreduced values.
    fn to_curve(&self, lo: &Rat, hi: &Rat) -> Result<PlCurve, EvalError> {
        let mut xs = vec![lo.clone()];
        let mut raw = vec![self.eval_parts(lo)?];
        if let Some((k_hi, _)) = self.seq.last_index_le(hi)? {
            self.ensure_prefix(k_hi)?;
            for k in 1..=k_hi {
                let a_k = Rat::from_integer(self.seq.at(k)?);
                if a_k > *lo && a_k < *hi {
                    let (n, d) = self.prefix_value(k)?;
                    xs.push(a_k);
                    raw.push(Ok((n, d)));
                }
            }
        }
        if hi > lo {
            xs.push(hi.clone());
            raw.push(self.eval_parts(hi)?);
        }
        let ys = raw
            .into_iter()
            .map(|r| r.map(|(n, d)| Rat::new_raw(n, d)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PlCurve::new(xs, ys))
    }
}

impl std::fmt::Debug for EtaFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EtaFn({:?})", self.seq)
    }
}

impl PartialEq for EtaFn {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}

impl Eq for EtaFn {}

/// Expression tree over the half-line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FnExpr {
    Const(Rat),
    Tau,
    TauPow(Rat),
    Eta(EtaFn),
    Pl(PlSpec),
    Add(Arc<FnExpr>, Arc<FnExpr>),
    Scale(Rat, Arc<FnExpr>),
    Join(Arc<FnExpr>, Arc<FnExpr>),
    Meet(Arc<FnExpr>, Arc<FnExpr>),
    Abs(Arc<FnExpr>),
}

/// Exactly affine restriction `f(x) = value + slope * (x - from)` valid for
/// all `x >= from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTail {
    pub from: Rat,
    pub value: Rat,
    pub slope: Rat,
}

impl AffineTail {
    pub fn value_at(&self, x: &Rat) -> Rat {
        &self.value + (x - &self.from) * &self.slope
    }
}

impl FnExpr {
    pub fn constant(c: Rat) -> FnExpr {
        FnExpr::Const(c)
    }

    pub fn constant_int(c: i64) -> FnExpr {
        FnExpr::Const(rat_int(c))
    }

    pub fn tau() -> FnExpr {
        FnExpr::Tau
    }

    pub fn tau_pow(alpha: Rat) -> Result<FnExpr, ExprError> {
        if !alpha.is_positive() || alpha >= rat_int(1) {
            return Err(ExprError::AlphaOutOfRange(alpha.to_string()));
        }
        if alpha.denom().to_u64().map_or(true, |d| d > POW_CAP) {
            return Err(ExprError::AlphaTooFine);
        }
        Ok(FnExpr::TauPow(alpha))
    }

    /// `sqrt(tau)`, the recovery probe function.
    pub fn sqrt_tau() -> FnExpr {
        FnExpr::TauPow(Rat::new(BigInt::one(), BigInt::from(2u8)))
    }

    pub fn eta(seq: Seq) -> FnExpr {
        FnExpr::Eta(EtaFn::new(seq))
    }

    pub fn pl(points: Vec<(Rat, Rat)>, final_slope: Rat) -> Result<FnExpr, ExprError> {
        Ok(FnExpr::Pl(PlSpec::new(points, final_slope)?))
    }

    pub fn add(f: FnExpr, g: FnExpr) -> FnExpr {
        FnExpr::Add(Arc::new(f), Arc::new(g))
    }

    pub fn scale(lambda: Rat, f: FnExpr) -> FnExpr {
        FnExpr::Scale(lambda, Arc::new(f))
    }

    pub fn join(f: FnExpr, g: FnExpr) -> FnExpr {
        FnExpr::Join(Arc::new(f), Arc::new(g))
    }

    pub fn meet(f: FnExpr, g: FnExpr) -> FnExpr {
        FnExpr::Meet(Arc::new(f), Arc::new(g))
    }

    pub fn abs_of(f: FnExpr) -> FnExpr {
        FnExpr::Abs(Arc::new(f))
    }

    pub fn contains_tau_pow(&self) -> bool {
        match self {
            FnExpr::TauPow(_) => true,
            FnExpr::Const(_) | FnExpr::Tau | FnExpr::Eta(_) | FnExpr::Pl(_) => false,
            FnExpr::Add(f, g) | FnExpr::Join(f, g) | FnExpr::Meet(f, g) => {
                f.contains_tau_pow() || g.contains_tau_pow()
            }
            FnExpr::Scale(_, f) | FnExpr::Abs(f) => f.contains_tau_pow(),
        }
    }

    fn eval_nonneg(&self, x: &Rat) -> Result<RealScalar, EvalError> {
        match self {
            FnExpr::Const(c) => Ok(RealScalar::exact(c.clone())),
            FnExpr::Tau => Ok(RealScalar::exact(x + rat_int(1))),
            FnExpr::TauPow(alpha) => {
                Ok(RealScalar::exact(x + rat_int(1)).pow(alpha)?)
            }
            FnExpr::Eta(e) => Ok(RealScalar::exact(e.eval(x)?)),
            FnExpr::Pl(p) => Ok(RealScalar::exact(p.eval(x))),
            FnExpr::Add(f, g) => Ok(f.eval_nonneg(x)?.add(&g.eval_nonneg(x)?)),
            FnExpr::Scale(l, f) => Ok(f.eval_nonneg(x)?.scale(l)),
            FnExpr::Join(f, g) => Ok(f.eval_nonneg(x)?.max(&g.eval_nonneg(x)?)),
            FnExpr::Meet(f, g) => Ok(f.eval_nonneg(x)?.min(&g.eval_nonneg(x)?)),
            FnExpr::Abs(f) => Ok(f.eval_nonneg(x)?.abs()),
        }
    }

    /// Pointwise evaluation. Exact whenever the input is exact and the
    /// expression contains no `tau_pow` atom.
    pub fn eval(&self, x: &RealScalar) -> Result<RealScalar, EvalError> {
        if x.is_negative() {
            return Err(EvalError::Negative(x.to_string()));
        }
        let v = self.eval_nonneg(&x.to_rat())?;
        if x.is_exact() {
            Ok(v)
        } else {
            // an approximate input taints the output tag
            match v {
                RealScalar::Exact(r) => Ok(RealScalar::approx(
                    super::fixed::Fixed::from_rat(&r, super::fixed::Rounding::Nearest),
                )),
                approx => Ok(approx),
            }
        }
    }

    pub fn eval_rat(&self, x: &Rat) -> Result<RealScalar, EvalError> {
        if x.is_negative() {
            return Err(EvalError::Negative(x.to_string()));
        }
        self.eval_nonneg(x)
    }

    /// Exact curve restriction to `[lo, hi]`; fails on `tau_pow` atoms.
    pub fn to_curve(&self, lo: &Rat, hi: &Rat) -> Result<PlCurve, EvalError> {
        if lo.is_negative() {
            return Err(EvalError::Negative(lo.to_string()));
        }
        debug_assert!(lo <= hi);
        match self {
            FnExpr::Const(c) => Ok(PlCurve::constant(lo.clone(), hi.clone(), c.clone())),
            FnExpr::Tau => {
                if lo == hi {
                    Ok(PlCurve::new(vec![lo.clone()], vec![lo + rat_int(1)]))
                } else {
                    Ok(PlCurve::new(
                        vec![lo.clone(), hi.clone()],
                        vec![lo + rat_int(1), hi + rat_int(1)],
                    ))
                }
            }
            FnExpr::TauPow(_) => Err(EvalError::NotPiecewiseLinear),
            FnExpr::Eta(e) => e.to_curve(lo, hi),
            FnExpr::Pl(p) => Ok(p.to_curve(lo, hi)),
            FnExpr::Add(f, g) => Ok(f.to_curve(lo, hi)?.add(&g.to_curve(lo, hi)?)),
            FnExpr::Scale(l, f) => Ok(f.to_curve(lo, hi)?.scale(l)),
            FnExpr::Join(f, g) => Ok(f.to_curve(lo, hi)?.join(&g.to_curve(lo, hi)?)),
            FnExpr::Meet(f, g) => Ok(f.to_curve(lo, hi)?.meet(&g.to_curve(lo, hi)?)),
            FnExpr::Abs(f) => Ok(f.to_curve(lo, hi)?.abs()),
        }
    }

    /// The exactly affine tail of the expression, when it has one.
    pub fn exact_tail(&self) -> Option<AffineTail> {
        match self {
            FnExpr::Const(c) => Some(AffineTail {
                from: Rat::zero(),
                value: c.clone(),
                slope: Rat::zero(),
            }),
            FnExpr::Tau => Some(AffineTail {
                from: Rat::zero(),
                value: rat_int(1),
                slope: rat_int(1),
            }),
            FnExpr::TauPow(_) | FnExpr::Eta(_) => None,
            FnExpr::Pl(p) => Some(AffineTail {
                from: p.last_breakpoint().clone(),
                value: p.ys.last().unwrap().clone(),
                slope: p.final_slope.clone(),
            }),
            FnExpr::Add(f, g) => {
                let (tf, tg) = (f.exact_tail()?, g.exact_tail()?);
                let from = tf.from.clone().max(tg.from.clone());
                Some(AffineTail {
                    value: tf.value_at(&from) + tg.value_at(&from),
                    slope: tf.slope + tg.slope,
                    from,
                })
            }
            FnExpr::Scale(l, f) => {
                let t = f.exact_tail()?;
                Some(AffineTail {
                    from: t.from,
                    value: t.value * l,
                    slope: t.slope * l,
                })
            }
            FnExpr::Join(f, g) => Self::tail_combine(f, g, true),
            FnExpr::Meet(f, g) => Self::tail_combine(f, g, false),
            FnExpr::Abs(f) => {
                let t = f.exact_tail()?;
                if t.slope.is_zero() {
                    return Some(AffineTail {
                        from: t.from,
                        value: t.value.abs(),
                        slope: Rat::zero(),
                    });
                }
                // past the zero crossing the sign is fixed
                let crossing = &t.from - &t.value / &t.slope;
                let from = t.from.clone().max(crossing);
                let v = t.value_at(&from);
                if t.slope.is_positive() {
                    Some(AffineTail { value: v.abs(), slope: t.slope, from })
                } else {
                    Some(AffineTail { value: v.abs(), slope: -t.slope, from })
                }
            }
        }
    }

    fn tail_combine(f: &FnExpr, g: &FnExpr, take_max: bool) -> Option<AffineTail> {
        let (tf, tg) = (f.exact_tail()?, g.exact_tail()?);
        let m = tf.from.clone().max(tg.from.clone());
        let (vf, vg) = (tf.value_at(&m), tg.value_at(&m));
        if tf.slope == tg.slope {
            let value = if take_max { vf.max(vg) } else { vf.min(vg) };
            return Some(AffineTail { from: m, value, slope: tf.slope });
        }
        // two distinct lines cross at most once past m
        let crossing = &m + (&vg - &vf) / (&tf.slope - &tg.slope);
        let steep = tf.slope.clone().max(tg.slope.clone());
        let shallow = tf.slope.clone().min(tg.slope.clone());
        let slope = if take_max { steep } else { shallow };
        if crossing > m {
            let winner = if tf.slope == slope { &tf } else { &tg };
            Some(AffineTail {
                value: winner.value_at(&crossing),
                from: crossing,
                slope,
            })
        } else {
            // winner already decided at m
            let pick_f = if take_max {
                vf > vg || (vf == vg && tf.slope == slope)
            } else {
                vf < vg || (vf == vg && tf.slope == slope)
            };
            let winner = if pick_f { &tf } else { &tg };
            Some(AffineTail {
                value: winner.value_at(&m),
                from: m,
                slope: winner.slope.clone(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::rat::rat;

    fn ev(f: &FnExpr, x: i64) -> RealScalar {
        f.eval(&RealScalar::from_int(x)).unwrap()
    }

    #[test]
    fn eta_matches_stated_values() {
        let e = FnExpr::eta(Seq::affine(2, 2).unwrap());
        assert_eq!(ev(&e, 4).to_rat(), rat_int(5));
        assert_eq!(ev(&e, 10).to_rat(), rat(43, 6));
        assert_eq!(ev(&e, 0).to_rat(), rat_int(1));
        assert_eq!(ev(&e, 6).to_rat(), rat_int(6));
    }

    #[test]
    fn tau_and_abs() {
        assert_eq!(ev(&FnExpr::tau(), 0).to_rat(), rat_int(1));
        let a = FnExpr::abs_of(FnExpr::constant_int(-4));
        assert_eq!(ev(&a, 7).to_rat(), rat_int(4));
    }

    #[test]
    fn negative_input_rejected() {
        let r = FnExpr::tau().eval(&RealScalar::exact(rat(-1, 2)));
        assert!(matches!(r, Err(EvalError::Negative(_))));
    }

    #[test]
    fn tau_pow_validation() {
        assert!(FnExpr::tau_pow(rat(1, 2)).is_ok());
        assert!(FnExpr::tau_pow(rat_int(1)).is_err());
        assert!(FnExpr::tau_pow(rat_int(0)).is_err());
        assert!(FnExpr::tau_pow(rat(3, 2)).is_err());
    }

    #[test]
    fn tau_pow_eval_exact_and_approx() {
        let f = FnExpr::sqrt_tau();
        let at3 = ev(&f, 3);
        assert!(at3.is_exact());
        assert_eq!(at3.to_rat(), rat_int(2));
        let at1 = ev(&f, 1);
        assert!(!at1.is_exact());
        assert!((at1.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn pl_atom_eval() {
        let p = FnExpr::pl(
            vec![(rat_int(0), rat_int(1)), (rat_int(4), rat_int(5))],
            rat(1, 2),
        )
        .unwrap();
        assert_eq!(ev(&p, 2).to_rat(), rat_int(3));
        assert_eq!(ev(&p, 8).to_rat(), rat_int(7));
    }

    #[test]
    fn lattice_nodes() {
        let f = FnExpr::join(FnExpr::tau(), FnExpr::constant_int(3));
        assert_eq!(ev(&f, 0).to_rat(), rat_int(3));
        assert_eq!(ev(&f, 5).to_rat(), rat_int(6));
        let g = FnExpr::meet(FnExpr::tau(), FnExpr::constant_int(3));
        assert_eq!(ev(&g, 5).to_rat(), rat_int(3));
    }

    #[test]
    fn eta_prefix_consistency_with_direct_recursion() {
        // direct, definition-level recursion as an independent oracle
        fn eta_stage(seq: &Seq, n: u64, x: &Rat) -> Rat {
            if n == 0 {
                return x + rat_int(1);
            }
            let a_n = Rat::from_integer(seq.at(n).unwrap());
            if *x < a_n {
                eta_stage(seq, n - 1, x)
            } else {
                eta_stage(seq, n - 1, &a_n) + (x - a_n) / rat_int(n as i64)
            }
        }
        let seq = Seq::affine(2, 2).unwrap();
        let e = EtaFn::new(seq.clone());
        for num in 0..60 {
            let x = rat(num * 3, 7);
            let depth = 40;
            assert!(x <= Rat::from_integer(seq.at(depth).unwrap()));
            assert_eq!(e.eval(&x).unwrap(), eta_stage(&seq, depth, &x), "x = {x}");
        }
    }

    #[test]
    fn exact_tails() {
        let t = FnExpr::tau().exact_tail().unwrap();
        assert_eq!(t.slope, rat_int(1));
        // tau - tau is eventually (exactly) zero
        let cancel = FnExpr::add(FnExpr::tau(), FnExpr::scale(rat_int(-1), FnExpr::tau()));
        let tc = cancel.exact_tail().unwrap();
        assert!(tc.slope.is_zero());
        assert!(tc.value.is_zero());
        // join(tau/2, const 3) eventually follows the line
        let j = FnExpr::join(
            FnExpr::scale(rat(1, 2), FnExpr::tau()),
            FnExpr::constant_int(3),
        );
        let tj = j.exact_tail().unwrap();
        assert_eq!(tj.slope, rat(1, 2));
        assert_eq!(tj.from, rat_int(5)); // (x+1)/2 = 3 at x = 5
        // |x+1 - 4| has slope 1 past x = 3
        let a = FnExpr::abs_of(FnExpr::add(FnExpr::tau(), FnExpr::constant_int(-4)));
        let ta = a.exact_tail().unwrap();
        assert_eq!(ta.from, rat_int(3));
        assert_eq!(ta.slope, rat_int(1));
        assert!(FnExpr::eta(Seq::affine(1, 1).unwrap()).exact_tail().is_none());
    }

    #[test]
    fn curve_restriction_matches_eval() {
        let f = FnExpr::join(
            FnExpr::eta(Seq::affine(2, 2).unwrap()),
            FnExpr::constant_int(4),
        );
        let c = f.to_curve(&rat_int(0), &rat_int(12)).unwrap();
        for i in 0..=24 {
            let x = rat(i, 2);
            assert_eq!(c.eval(&x), f.eval_rat(&x).unwrap().to_rat(), "x = {x}");
        }
    }
}
