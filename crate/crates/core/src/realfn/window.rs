//! Window extrema, diameters, and sup bounds.
//!
//! On the piecewise-linear fragment everything is exact: join/meet crossings
//! are inserted as exact breakpoints, so extrema are read off curve nodes.
//! Expressions containing `tau_pow` are handled by structural enclosure plus
//! adaptive sampling with step derived from a slope bound; the result then
//! carries its resolution.

use num_traits::{Signed, Zero};

use super::expr::{EvalError, FnExpr};
use super::fixed::Rounding;
use super::rat::{Rat, rat_int};
use super::real::RealScalar;

/// Extrema over a window. When `exact` is false, `min`/`max` come from
/// sampling and the true extrema lie within `resolution` below `min` and
/// above `max`; `outer_min`/`outer_max` are guaranteed enclosure bounds.
#[derive(Debug, Clone)]
pub struct WindowExtrema {
    pub min: RealScalar,
    pub max: RealScalar,
    pub outer_min: RealScalar,
    pub outer_max: RealScalar,
    pub exact: bool,
    pub resolution: Rat,
}

impl WindowExtrema {
    pub fn diam(&self) -> RealScalar {
        self.max.sub(&self.min)
    }

    /// Upper bound on the true diameter.
    pub fn diam_upper(&self) -> RealScalar {
        self.outer_max.sub(&self.outer_min)
    }
}

/// Structural enclosure of the expression over `[lo, hi]`. Exact for every
/// atom (curves for the piecewise-linear ones, monotone endpoints for
/// `tau_pow`); combinators lose only correlation between their children.
fn enclose(f: &FnExpr, lo: &Rat, hi: &Rat) -> Result<(RealScalar, RealScalar), EvalError> {
    match f {
        FnExpr::Const(c) => Ok((RealScalar::exact(c.clone()), RealScalar::exact(c.clone()))),
        FnExpr::Tau => Ok((
            RealScalar::exact(lo + rat_int(1)),
            RealScalar::exact(hi + rat_int(1)),
        )),
        FnExpr::TauPow(alpha) => {
            let l = RealScalar::exact(lo + rat_int(1)).pow_dir(alpha, Rounding::Down)?;
            let h = RealScalar::exact(hi + rat_int(1)).pow_dir(alpha, Rounding::Up)?;
            Ok((l, h))
        }
        FnExpr::Eta(e) => {
            let (l, _) = e.eval_bounds(lo)?;
            let (_, h) = e.eval_bounds(hi)?;
            Ok((RealScalar::exact(l), RealScalar::exact(h)))
        }
        FnExpr::Pl(_) => {
            let (mn, mx) = f.to_curve(lo, hi)?.extrema();
            Ok((RealScalar::exact(mn), RealScalar::exact(mx)))
        }
        FnExpr::Add(a, b) => {
            let (la, ha) = enclose(a, lo, hi)?;
            let (lb, hb) = enclose(b, lo, hi)?;
            Ok((la.add(&lb), ha.add(&hb)))
        }
        FnExpr::Scale(k, a) => {
            let (l, h) = enclose(a, lo, hi)?;
            if k.is_negative() {
                Ok((h.scale(k), l.scale(k)))
            } else {
                Ok((l.scale(k), h.scale(k)))
            }
        }
        FnExpr::Join(a, b) => {
            let (la, ha) = enclose(a, lo, hi)?;
            let (lb, hb) = enclose(b, lo, hi)?;
            Ok((la.max(&lb), ha.max(&hb)))
        }
        FnExpr::Meet(a, b) => {
            let (la, ha) = enclose(a, lo, hi)?;
            let (lb, hb) = enclose(b, lo, hi)?;
            Ok((la.min(&lb), ha.min(&hb)))
        }
        FnExpr::Abs(a) => {
            let (l, h) = enclose(a, lo, hi)?;
            if !l.is_negative() {
                Ok((l, h))
            } else if !h.to_rat().is_positive() {
                Ok((h.neg(), l.neg()))
            } else {
                Ok((RealScalar::zero(), l.neg().max(&h)))
            }
        }
    }
}

/// Upper bound on `sup |f'|` over `[lo, hi]`, structural.
pub fn slope_bound(f: &FnExpr, lo: &Rat, hi: &Rat) -> Result<RealScalar, EvalError> {
    match f {
        FnExpr::Const(_) => Ok(RealScalar::zero()),
        FnExpr::Tau => Ok(RealScalar::one()),
        FnExpr::TauPow(alpha) => {
            // derivative alpha * (x+1)^(alpha-1) is largest at the left end
            let base = RealScalar::exact(lo + rat_int(1));
            let one_minus = rat_int(1) - alpha;
            let denom = base.pow_dir(&one_minus, Rounding::Down)?;
            Ok(RealScalar::exact(alpha.clone())
                .div(&denom)
                .unwrap_or_else(RealScalar::one))
        }
        FnExpr::Eta(e) => Ok(RealScalar::exact(e.slope_at(lo)?)),
        FnExpr::Pl(_) => {
            let c = f.to_curve(lo, hi)?;
            // to_curve already clips to the window, but the final slope may
            // extend past the last breakpoint; take it into account.
            if let FnExpr::Pl(spec) = f {
                let tail = spec.final_slope().abs();
                Ok(RealScalar::exact(c.max_abs_slope().max(tail)))
            } else {
                unreachable!()
            }
        }
        FnExpr::Add(a, b) => Ok(slope_bound(a, lo, hi)?.add(&slope_bound(b, lo, hi)?)),
        FnExpr::Scale(k, a) => Ok(slope_bound(a, lo, hi)?.scale(&k.abs())),
        FnExpr::Join(a, b) | FnExpr::Meet(a, b) => {
            Ok(slope_bound(a, lo, hi)?.max(&slope_bound(b, lo, hi)?))
        }
        FnExpr::Abs(a) => slope_bound(a, lo, hi),
    }
}

fn window_bounds(x: &RealScalar, r: &RealScalar) -> Result<(Rat, Rat), EvalError> {
    if x.is_negative() {
        return Err(EvalError::Negative(x.to_string()));
    }
    let lo = x.to_rat();
    let hi = &lo + r.to_rat();
    Ok((lo, hi))
}

/// Exact min and max of `f` over `[x, x + r]` on the piecewise-linear
/// fragment; sampled with guaranteed enclosure otherwise.
pub fn window_extrema(
    f: &FnExpr,
    x: &RealScalar,
    r: &RealScalar,
) -> Result<WindowExtrema, EvalError> {
    window_extrema_res(f, x, r, None)
}

/// As [`window_extrema`], with a requested sampling resolution for the
/// inexact path.
pub fn window_extrema_res(
    f: &FnExpr,
    x: &RealScalar,
    r: &RealScalar,
    res_target: Option<&Rat>,
) -> Result<WindowExtrema, EvalError> {
    let (lo, hi) = window_bounds(x, r)?;
    if !f.contains_tau_pow() {
        let (mn, mx) = f.to_curve(&lo, &hi)?.extrema();
        let exact = x.is_exact() && r.is_exact();
        return Ok(WindowExtrema {
            min: RealScalar::exact(mn.clone()),
            max: RealScalar::exact(mx.clone()),
            outer_min: RealScalar::exact(mn),
            outer_max: RealScalar::exact(mx),
            exact,
            resolution: Rat::zero(),
        });
    }

    let width = &hi - &lo;
    let slope = slope_bound(f, &lo, &hi)?;
    let travel = RealScalar::exact(width.clone()).mul(&slope);
    let pieces: u64 = match res_target {
        None => 16,
        Some(res) if res.is_positive() => {
            let need = travel.to_rat() / res;
            let ceil = super::rat::ceil_big(&need);
            use num_traits::ToPrimitive;
            ceil.to_u64().unwrap_or(u64::MAX).clamp(1, 1 << 16)
        }
        Some(_) => 16,
    };

    let mut inner_min: Option<RealScalar> = None;
    let mut inner_max: Option<RealScalar> = None;
    let mut outer_min: Option<RealScalar> = None;
    let mut outer_max: Option<RealScalar> = None;
    let step = width / rat_int(pieces as i64);
    let mut left = lo.clone();
    for i in 0..pieces {
        let right = if i + 1 == pieces {
            hi.clone()
        } else {
            &lo + &step * rat_int(i as i64 + 1)
        };
        let (el, eh) = enclose(f, &left, &right)?;
        outer_min = Some(match outer_min {
            None => el.clone(),
            Some(m) => m.min(&el),
        });
        outer_max = Some(match outer_max {
            None => eh.clone(),
            Some(m) => m.max(&eh),
        });
        let pv = f.eval_rat(&left)?;
        inner_min = Some(match inner_min {
            None => pv.clone(),
            Some(m) => m.min(&pv),
        });
        inner_max = Some(match inner_max {
            None => pv,
            Some(m) => m.max(&pv),
        });
        left = right;
    }
    let last = f.eval_rat(&hi)?;
    let inner_min = inner_min.unwrap().min(&last);
    let inner_max = inner_max.unwrap().max(&last);
    let resolution = {
        // within one piece the function moves at most slope * piece width
        let piece = width / rat_int(pieces as i64);
        let drift = slope.to_rat() * piece;
        // plus the fixed-point rounding slack of point evaluations
        drift + Rat::new(1.into(), num_bigint::BigInt::from(1u8) << 120)
    };
    Ok(WindowExtrema {
        min: inner_min,
        max: inner_max,
        outer_min: outer_min.unwrap(),
        outer_max: outer_max.unwrap(),
        exact: false,
        resolution,
    })
}

/// `max - min` over the window (sampled value on the inexact path).
pub fn window_diam(f: &FnExpr, x: &RealScalar, r: &RealScalar) -> Result<RealScalar, EvalError> {
    Ok(window_extrema(f, x, r)?.diam())
}

/// Sup of `|f|` over `[0, t]`: exact on the piecewise-linear fragment, a
/// guaranteed upper bound otherwise.
pub fn sup_abs_on(f: &FnExpr, t: &RealScalar) -> Result<RealScalar, EvalError> {
    if t.is_negative() {
        return Err(EvalError::Negative(t.to_string()));
    }
    let lo = Rat::zero();
    let hi = t.to_rat();
    if !f.contains_tau_pow() {
        let (mn, mx) = f.to_curve(&lo, &hi)?.extrema();
        return Ok(RealScalar::exact(mn.abs().max(mx.abs())));
    }
    let (el, eh) = enclose(f, &lo, &hi)?;
    Ok(el.abs().max(&eh.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::rat::rat;
    use crate::realfn::seq::Seq;

    fn ri(v: i64) -> RealScalar {
        RealScalar::from_int(v)
    }

    #[test]
    fn linear_window() {
        let w = window_extrema(&FnExpr::tau(), &ri(10), &ri(3)).unwrap();
        assert!(w.exact);
        assert_eq!(w.min.to_rat(), rat_int(11));
        assert_eq!(w.max.to_rat(), rat_int(14));
    }

    #[test]
    fn constant_window() {
        let w = window_extrema(&FnExpr::constant_int(5), &ri(0), &ri(100)).unwrap();
        assert_eq!(w.min.to_rat(), rat_int(5));
        assert_eq!(w.max.to_rat(), rat_int(5));
        assert!(w.diam().is_zero());
    }

    #[test]
    fn eta_window_exact() {
        let e = FnExpr::eta(Seq::affine(2, 2).unwrap());
        let w = window_extrema(&e, &ri(4), &ri(4)).unwrap();
        assert!(w.exact);
        assert_eq!(w.min.to_rat(), rat_int(5));
        assert_eq!(w.max.to_rat(), rat_int(6));
    }

    #[test]
    fn join_window_subdivides_crossings() {
        // max(x+1, 6-x) over [0, 10]: min at the crossing x = 5/2
        let pl = FnExpr::pl(vec![(rat_int(0), rat_int(6))], rat_int(-1)).unwrap();
        let f = FnExpr::join(FnExpr::tau(), pl);
        let w = window_extrema(&f, &ri(0), &ri(10)).unwrap();
        assert_eq!(w.min.to_rat(), rat(7, 2));
        assert_eq!(w.max.to_rat(), rat_int(11));
    }

    #[test]
    fn tau_pow_window_encloses_truth() {
        let f = FnExpr::sqrt_tau();
        let w = window_extrema(&f, &ri(256), &ri(2)).unwrap();
        assert!(!w.exact);
        let true_min = 257f64.sqrt();
        let true_max = 259f64.sqrt();
        assert!(w.outer_min.to_f64() <= true_min + 1e-12);
        assert!(w.outer_max.to_f64() >= true_max - 1e-12);
        assert!((w.min.to_f64() - true_min).abs() < 1e-9);
        assert!((w.max.to_f64() - true_max).abs() < 1e-9);
        // monotone atom: sampling at endpoints is tight
        assert!(w.diam_upper().to_f64() < 0.0625);
    }

    #[test]
    fn sup_abs_examples() {
        assert_eq!(
            sup_abs_on(&FnExpr::constant_int(-4), &ri(10)).unwrap().to_rat(),
            rat_int(4)
        );
        assert_eq!(sup_abs_on(&FnExpr::tau(), &ri(9)).unwrap().to_rat(), rat_int(10));
        let s = sup_abs_on(&FnExpr::sqrt_tau(), &ri(257)).unwrap();
        assert!(!s.is_exact());
        let truth = 258f64.sqrt();
        assert!(s.to_f64() >= truth - 1e-12);
        assert!((s.to_f64() - truth).abs() < 1e-9);
    }

    #[test]
    fn slope_bounds() {
        let s = slope_bound(&FnExpr::sqrt_tau(), &rat_int(0), &rat_int(100)).unwrap();
        assert!(s.to_f64() >= 0.5);
        let e = FnExpr::eta(Seq::affine(2, 2).unwrap());
        let s = slope_bound(&e, &rat_int(9), &rat_int(11)).unwrap();
        assert_eq!(s.to_rat(), rat(1, 4));
    }

    #[test]
    fn dense_sampling_agrees_on_pl() {
        let pl = FnExpr::pl(
            vec![
                (rat_int(0), rat_int(2)),
                (rat_int(3), rat_int(-1)),
                (rat_int(7), rat_int(4)),
            ],
            rat(1, 3),
        )
        .unwrap();
        let f = FnExpr::abs_of(pl);
        let w = window_extrema(&f, &ri(1), &ri(8)).unwrap();
        // brute force with step 1/1000
        let mut mn = f.eval_rat(&rat_int(1)).unwrap().to_rat();
        let mut mx = mn.clone();
        for i in 0..=8000 {
            let x = rat_int(1) + rat(i, 1000);
            let v = f.eval_rat(&x).unwrap().to_rat();
            if v < mn {
                mn = v.clone();
            }
            if v > mx {
                mx = v;
            }
        }
        let tol = rat(1, 100); // sampling error bound: step * max slope
        assert!((w.min.to_rat() - mn).abs() <= tol);
        assert!((w.max.to_rat() - mx).abs() <= tol);
        // and the exact result can only widen the sampled range
        assert!(w.min.to_rat() <= mn && w.max.to_rat() >= mx);
    }
}
