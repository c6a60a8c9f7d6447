//! Exact piecewise-linear curves on a closed interval.
//!
//! A curve is a list of nodes `(x_i, y_i)` with strictly increasing `x_i`,
//! interpreted linearly between nodes. Join and meet insert the crossing
//! points of their operands exactly, so extrema are always attained at nodes.

use num_traits::{Signed, Zero};

use super::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlCurve {
    xs: Vec<Rat>,
    ys: Vec<Rat>,
}

impl PlCurve {
    /// `xs` strictly increasing, at least one node.
    pub fn new(xs: Vec<Rat>, ys: Vec<Rat>) -> PlCurve {
        assert_eq!(xs.len(), ys.len());
        assert!(!xs.is_empty());
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        PlCurve { xs, ys }
    }

    pub fn constant(lo: Rat, hi: Rat, v: Rat) -> PlCurve {
        if lo == hi {
            PlCurve::new(vec![lo], vec![v])
        } else {
            PlCurve::new(vec![lo, hi], vec![v.clone(), v])
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn lo(&self) -> &Rat {
        &self.xs[0]
    }

    pub fn hi(&self) -> &Rat {
        self.xs.last().unwrap()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        debug_assert!(x >= self.lo() && x <= self.hi());
        let i = match self.xs.binary_search_by(|p| p.cmp(x)) {
            Ok(i) => return self.ys[i].clone(),
            Err(i) => i - 1, // x > xs[0] here
        };
        let t = (x - &self.xs[i]) / (&self.xs[i + 1] - &self.xs[i]);
        &self.ys[i] + (&self.ys[i + 1] - &self.ys[i]) * t
    }

    /// Both curves must cover the same interval.
    fn aligned(a: &PlCurve, b: &PlCurve) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
        debug_assert_eq!(a.lo(), b.lo());
        debug_assert_eq!(a.hi(), b.hi());
        let mut xs = Vec::with_capacity(a.xs.len() + b.xs.len());
        let (mut i, mut j) = (0, 0);
        while i < a.xs.len() || j < b.xs.len() {
            let next = match (a.xs.get(i), b.xs.get(j)) {
                (Some(x), Some(y)) => {
                    if x < y {
                        i += 1;
                        x.clone()
                    } else if y < x {
                        j += 1;
                        y.clone()
                    } else {
                        i += 1;
                        j += 1;
                        x.clone()
                    }
                }
                (Some(x), None) => {
                    i += 1;
                    x.clone()
                }
                (None, Some(y)) => {
                    j += 1;
                    y.clone()
                }
                (None, None) => unreachable!(),
            };
            xs.push(next);
        }
        let ya: Vec<Rat> = xs.iter().map(|x| a.eval(x)).collect();
        let yb: Vec<Rat> = xs.iter().map(|x| b.eval(x)).collect();
        (xs, ya, yb)
    }

    pub fn add(&self, other: &PlCurve) -> PlCurve {
        let (xs, ya, yb) = PlCurve::aligned(self, other);
        let ys = ya.into_iter().zip(yb).map(|(a, b)| a + b).collect();
        PlCurve::new(xs, ys)
    }

    pub fn scale(&self, k: &Rat) -> PlCurve {
        PlCurve::new(self.xs.clone(), self.ys.iter().map(|y| y * k).collect())
    }

    pub fn shift(&self, k: &Rat) -> PlCurve {
        PlCurve::new(self.xs.clone(), self.ys.iter().map(|y| y + k).collect())
    }

    fn combine(&self, other: &PlCurve, pick_max: bool) -> PlCurve {
        let (xs, ya, yb) = PlCurve::aligned(self, other);
        let mut out_x: Vec<Rat> = Vec::with_capacity(xs.len() + 4);
        let mut out_y: Vec<Rat> = Vec::with_capacity(xs.len() + 4);
        let pick = |a: &Rat, b: &Rat| if pick_max { a.max(b).clone() } else { a.min(b).clone() };
        for i in 0..xs.len() {
            if i > 0 {
                let d0 = &ya[i - 1] - &yb[i - 1];
                let d1 = &ya[i] - &yb[i];
                if d0.is_positive() && d1.is_negative() || d0.is_negative() && d1.is_positive() {
                    // strict sign change: exact crossing inside the segment
                    let t = &d0 / (&d0 - &d1);
                    let xc = &xs[i - 1] + (&xs[i] - &xs[i - 1]) * t;
                    let yc = self.eval(&xc);
                    out_x.push(xc);
                    out_y.push(yc);
                }
            }
            out_x.push(xs[i].clone());
            out_y.push(pick(&ya[i], &yb[i]));
        }
        PlCurve::new(out_x, out_y)
    }

    pub fn join(&self, other: &PlCurve) -> PlCurve {
        self.combine(other, true)
    }

    pub fn meet(&self, other: &PlCurve) -> PlCurve {
        self.combine(other, false)
    }

    pub fn abs(&self) -> PlCurve {
        let zero = PlCurve::constant(self.lo().clone(), self.hi().clone(), Rat::zero());
        let pos = self.join(&zero);
        let neg = self.scale(&-Rat::from_integer(1.into())).join(&zero);
        pos.add(&neg)
    }

    /// Exact minimum and maximum over the whole interval.
    pub fn extrema(&self) -> (Rat, Rat) {
        let mut min = self.ys[0].clone();
        let mut max = self.ys[0].clone();
        for y in &self.ys[1..] {
            if *y < min {
                min = y.clone();
            }
            if *y > max {
                max = y.clone();
            }
        }
        (min, max)
    }

    /// Largest absolute segment slope; zero for single-node curves.
    pub fn max_abs_slope(&self) -> Rat {
        let mut best = Rat::zero();
        for i in 1..self.xs.len() {
            let s = ((&self.ys[i] - &self.ys[i - 1]) / (&self.xs[i] - &self.xs[i - 1])).abs();
            if s > best {
                best = s;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::rat::{rat, rat_int};

    fn line(lo: i64, hi: i64, f: impl Fn(i64) -> Rat) -> PlCurve {
        PlCurve::new(vec![rat_int(lo), rat_int(hi)], vec![f(lo), f(hi)])
    }

    #[test]
    fn join_inserts_crossing() {
        // f(x) = x on [0,4], g(x) = 4 - x on [0,4]; cross at x = 2
        let f = line(0, 4, rat_int);
        let g = line(0, 4, |x| rat_int(4 - x));
        let j = f.join(&g);
        let xs: Vec<_> = j.nodes().map(|(x, _)| x.clone()).collect();
        assert!(xs.contains(&rat_int(2)));
        assert_eq!(j.eval(&rat_int(2)), rat_int(2));
        assert_eq!(j.extrema(), (rat_int(2), rat_int(4)));
        let m = f.meet(&g);
        assert_eq!(m.extrema(), (rat_int(0), rat_int(2)));
    }

    #[test]
    fn abs_of_signed_line() {
        // f(x) = x - 2 on [0,5]; |f| has a kink at 2
        let f = line(0, 5, |x| rat_int(x - 2));
        let a = f.abs();
        assert_eq!(a.eval(&rat_int(2)), rat_int(0));
        assert_eq!(a.eval(&rat_int(0)), rat_int(2));
        assert_eq!(a.extrema(), (rat_int(0), rat_int(3)));
    }

    #[test]
    fn fractional_crossing_is_exact() {
        // f = 3x on [0,1], g = 1 (constant): crossing at exactly 1/3
        let f = line(0, 1, |x| rat_int(3 * x));
        let g = PlCurve::constant(rat_int(0), rat_int(1), rat_int(1));
        let j = f.meet(&g);
        let xs: Vec<_> = j.nodes().map(|(x, _)| x.clone()).collect();
        assert!(xs.contains(&rat(1, 3)));
    }

    #[test]
    fn slopes() {
        let f = PlCurve::new(
            vec![rat_int(0), rat_int(4), rat_int(6)],
            vec![rat_int(1), rat_int(5), rat_int(6)],
        );
        assert_eq!(f.max_abs_slope(), rat_int(1));
        assert_eq!(f.eval(&rat_int(5)), rat(11, 2));
    }
}
