//! PL₂ maps of the real line that commute with the unit translation outside
//! a bounded window: `a(x - 1) = a(x) - 1` for `x <= lo` and
//! `a(x + 1) = a(x) + 1` for `x >= hi`.
//!
//! This one engine backs line maps (translation tails), automorphisms of F
//! (arbitrary periodic tails) and degree-one lifts of circle maps (globally
//! periodic).

use std::cmp::{max, min};
use std::fmt;

use super::segments::{merge_sorted, Knot, Segments};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Stored data: the knots of the map on `[lo - 1, hi + 1]`. Every integer
/// in that range is a knot; other knots are genuine slope changes. The
/// window is as small as possible, and a globally periodic map is stored
/// with `lo = hi = 0`. Equality of values is therefore equality of maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicTailMap {
    lo: i64,
    hi: i64,
    seg: Segments,
}

fn int(n: i64) -> Dyadic {
    Dyadic::from_int(n)
}

fn is_int(x: &Dyadic) -> bool {
    x.is_integer()
}

impl PeriodicTailMap {
    pub fn identity() -> Self {
        Self::translation(0)
    }

    pub fn translation(c: i64) -> Self {
        let pts = (-1..=1).map(|x| (int(x), int(x + c))).collect();
        PeriodicTailMap { lo: 0, hi: 0, seg: Segments::from_points(pts, is_int).unwrap() }
    }

    /// Builds from knots covering `[lo - 1, hi + 1]`. The pieces on
    /// `[lo - 1, lo]` and `[hi, hi + 1]` are the tail periods.
    pub fn new(lo: i64, hi: i64, points: Vec<Knot>) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidMap(format!("empty window [{lo}, {hi}]")));
        }
        let raw = Segments::from_points(points, |_| true)?;
        if raw.start().0 != int(lo - 1) || raw.end().0 != int(hi + 1) {
            return Err(Error::InvalidMap(format!(
                "knots must span [{}, {}], got [{}, {}]",
                lo - 1,
                hi + 1,
                raw.start().0,
                raw.end().0
            )));
        }
        let xs: Vec<Dyadic> = raw.knots().iter().map(|k| k.0.clone()).collect();
        let xs = merge_sorted(vec![xs, (lo - 1..=hi + 1).map(int).collect()]);
        let ys = raw.eval_sorted(&xs);
        let pts = xs.into_iter().zip(ys).collect();
        let seg = Segments::from_points(pts, is_int)?;
        let one = Dyadic::one();
        let y = |x: i64| seg.eval(&int(x)).unwrap();
        if &y(lo) - &y(lo - 1) != one || &y(hi + 1) - &y(hi) != one {
            return Err(Error::InvalidMap("tail pieces must advance by exactly 1".into()));
        }
        Ok(Self::canonical(lo, hi, seg))
    }

    fn canonical(mut lo: i64, mut hi: i64, seg: Segments) -> Self {
        let step = |k: i64| -> bool {
            // piece [k, k+1] shifted by +1 equals piece [k+1, k+2]
            let a = seg.knots_between(&int(k), &int(k + 1));
            let b = seg.knots_between(&int(k + 1), &int(k + 2));
            a.len() == b.len()
                && a.iter().zip(b).all(|(p, q)| {
                    let one = Dyadic::one();
                    &p.0 + &one == q.0 && &p.1 + &one == q.1
                })
        };
        while lo < hi && step(lo - 1) {
            lo += 1;
        }
        while hi > lo && step(hi - 1) {
            hi -= 1;
        }
        if lo == hi && step(lo - 1) {
            // Globally periodic: re-anchor the period at [-1, 0].
            let shift = int(-lo);
            let piece: Vec<Knot> = seg
                .knots_between(&int(lo - 1), &int(lo))
                .iter()
                .map(|(x, y)| (x + &shift, y + &shift))
                .collect();
            let one = Dyadic::one();
            let mut pts = piece.clone();
            pts.extend(piece.iter().skip(1).map(|(x, y)| (x + &one, y + &one)));
            let seg = Segments::from_points(pts, is_int).unwrap();
            return PeriodicTailMap { lo: 0, hi: 0, seg };
        }
        let kept = seg.knots_between(&int(lo - 1), &int(hi + 1)).to_vec();
        let seg = Segments::from_points(kept, is_int).unwrap();
        PeriodicTailMap { lo, hi, seg }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// Knots on `[lo - 1, hi + 1]`.
    pub fn segments(&self) -> &Segments {
        &self.seg
    }

    pub fn knot_count(&self) -> usize {
        self.seg.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// True when the map commutes with the unit translation everywhere.
    pub fn is_globally_periodic(&self) -> bool {
        self.lo == 0 && self.hi == 0 && {
            let l = self.left_piece();
            let r = self.right_piece();
            l.translate(&Dyadic::one(), &Dyadic::one()) == r
        }
    }

    /// The period piece on `[lo - 1, lo]`.
    pub fn left_piece(&self) -> Segments {
        let k = self.seg.knots_between(&int(self.lo - 1), &int(self.lo)).to_vec();
        Segments::from_points(k, is_int).unwrap()
    }

    /// The period piece on `[hi, hi + 1]`.
    pub fn right_piece(&self) -> Segments {
        let k = self.seg.knots_between(&int(self.hi), &int(self.hi + 1)).to_vec();
        Segments::from_points(k, is_int).unwrap()
    }

    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        let lo1 = int(self.lo - 1);
        let hi1 = int(self.hi + 1);
        if x < &lo1 {
            let k = self.lo - 1 - x.floor_i64();
            let kd = int(k);
            self.seg.eval(&(x + &kd)).unwrap() - kd
        } else if x > &hi1 {
            let k = x.ceil_i64() - (self.hi + 1);
            let kd = int(k);
            self.seg.eval(&(x - &kd)).unwrap() + kd
        } else {
            self.seg.eval(x).unwrap()
        }
    }

    pub fn eval_inv(&self, y: &Dyadic) -> Dyadic {
        let ylo = &self.seg.start().1;
        let yhi = &self.seg.end().1;
        if y < ylo {
            let kd = int((ylo - y).ceil_i64());
            self.seg.eval_inv(&(y + &kd)).unwrap() - kd
        } else if y > yhi {
            let kd = int((y - yhi).ceil_i64());
            self.seg.eval_inv(&(y - &kd)).unwrap() + kd
        } else {
            self.seg.eval_inv(y).unwrap()
        }
    }

    /// `eval` at ascending points.
    pub fn eval_sorted(&self, xs: &[Dyadic]) -> Vec<Dyadic> {
        let (a, b) = (int(self.lo - 1), int(self.hi + 1));
        let i = xs.partition_point(|x| x < &a);
        let j = xs.partition_point(|x| x <= &b);
        let mut out = self.tail_sweep(&xs[..i], true, false);
        out.extend(self.seg.eval_sorted(&xs[i..j]));
        out.extend(self.tail_sweep(&xs[j..], false, false));
        out
    }

    /// `eval_inv` at ascending points.
    pub fn eval_inv_sorted(&self, ys: &[Dyadic]) -> Vec<Dyadic> {
        let (a, b) = (&self.seg.start().1, &self.seg.end().1);
        let i = ys.partition_point(|y| y < a);
        let j = ys.partition_point(|y| y <= b);
        let mut out = self.tail_sweep(&ys[..i], true, true);
        out.extend(self.seg.eval_inv_sorted(&ys[i..j]));
        out.extend(self.tail_sweep(&ys[j..], false, true));
        out
    }

    /// Evaluates ascending points beyond one end of the stored knots: each
    /// run sharing an integer shift into the tail period is swept over it.
    fn tail_sweep(&self, pts: &[Dyadic], left: bool, inverse: bool) -> Vec<Dyadic> {
        if pts.is_empty() {
            return Vec::new();
        }
        let n = self.seg.len();
        let (first, last) = if left {
            (0, self.seg.knots_between(&int(self.lo - 1), &int(self.lo)).len() - 1)
        } else {
            (n - self.seg.knots_between(&int(self.hi), &int(self.hi + 1)).len(), n - 1)
        };
        let (ylo, yhi) = (&self.seg.start().1, &self.seg.end().1);
        // amount added to bring a point into the period
        let shift = |p: &Dyadic| -> i64 {
            match (left, inverse) {
                (true, false) => self.lo - 1 - p.floor_i64(),
                (false, false) => self.hi + 1 - p.ceil_i64(),
                (true, true) => (ylo - p).ceil_i64(),
                (false, true) => -(p - yhi).ceil_i64(),
            }
        };
        let mut out = Vec::with_capacity(pts.len());
        let mut start = 0;
        while start < pts.len() {
            let k = shift(&pts[start]);
            let mut end = start + 1;
            while end < pts.len() && shift(&pts[end]) == k {
                end += 1;
            }
            let kd = int(k);
            let moved: Vec<Dyadic> = pts[start..end].iter().map(|p| p + &kd).collect();
            out.extend(self.seg.sweep_range(first, last, &moved, inverse).into_iter().map(|v| v - &kd));
            start = end;
        }
        out
    }

    /// Knot coordinates (x when `pick_y` is false, y otherwise) of the full
    /// periodic extension lying in `[a, b]`, sorted.
    fn knot_coords(&self, a: &Dyadic, b: &Dyadic, pick_y: bool) -> Vec<Dyadic> {
        let coord = |k: &Knot| if pick_y { k.1.clone() } else { k.0.clone() };
        let knots = self.seg.knots();
        let nl = self.seg.knots_between(&int(self.lo - 1), &int(self.lo)).len();
        let left: Vec<Dyadic> = knots[..nl - 1].iter().map(coord).collect();
        let nr = self.seg.knots_between(&int(self.hi), &int(self.hi + 1)).len();
        let right: Vec<Dyadic> = knots[knots.len() - nr + 1..].iter().map(coord).collect();
        let first = coord(&knots[0]);
        let last = coord(knots.last().unwrap());

        // Left copies, stored knots and right copies occupy disjoint
        // consecutive ranges, so emitting them in that order keeps the
        // output sorted.
        let mut out: Vec<Dyadic> = Vec::new();
        if a < &first {
            // shifts k >= 1 bringing the left period into [a, first)
            let kmax = (&first - a).ceil_i64() + 1;
            for k in (1..=kmax).rev() {
                let kd = int(k);
                out.extend(left.iter().map(|c| c - &kd).filter(|c| a <= c && c <= b));
            }
        }
        out.extend(knots.iter().map(coord).filter(|c| a <= c && c <= b));
        if b > &last {
            let kmax = (b - &last).ceil_i64() + 1;
            for k in 1..=kmax {
                let kd = int(k);
                out.extend(right.iter().map(|c| c + &kd).filter(|c| a <= c && c <= b));
            }
        }
        debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
        out
    }

    /// `self ∘ inner`: `inner` is applied first.
    pub fn compose(&self, inner: &PeriodicTailMap) -> PeriodicTailMap {
        let lo = min(inner.lo, inner.eval_inv(&int(self.lo)).floor_i64());
        let hi = max(inner.hi, inner.eval_inv(&int(self.hi)).ceil_i64());
        let (a, b) = (int(lo - 1), int(hi + 1));
        let (ta, tb) = (inner.eval(&a), inner.eval(&b));
        let own: Vec<Dyadic> = inner.knot_coords(&a, &b, false);
        let pulled: Vec<Dyadic> = inner.eval_inv_sorted(&self.knot_coords(&ta, &tb, false));
        let ints: Vec<Dyadic> = (lo - 1..=hi + 1).map(int).collect();
        let xs = merge_sorted(vec![own, pulled, ints]);
        let ys = self.eval_sorted(&inner.eval_sorted(&xs));
        let pts = xs.into_iter().zip(ys).collect();
        let seg = Segments::from_points(pts, is_int).expect("composition of PL2 maps is PL2");
        Self::canonical(lo, hi, seg)
    }

    /// `self ∘ f ∘ self⁻¹` in one pass, without building the inverse.
    pub fn conjugate(&self, f: &PeriodicTailMap) -> PeriodicTailMap {
        let x_lo = min(min(self.lo, f.lo), f.eval_inv(&int(self.lo)).floor_i64());
        let x_hi = max(max(self.hi, f.hi), f.eval_inv(&int(self.hi)).ceil_i64());
        let lo = self.eval(&int(x_lo)).floor_i64();
        let hi = self.eval(&int(x_hi)).ceil_i64();
        let ints: Vec<Dyadic> = (lo - 1..=hi + 1).map(int).collect();
        let at_ints = self.eval_inv_sorted(&ints);
        let (a, b) = (&at_ints[0], at_ints.last().unwrap());
        let (fa, fb) = (f.eval(a), f.eval(b));
        let own = self.knot_coords(a, b, false);
        let inner = f.knot_coords(a, b, false);
        let pulled = f.eval_inv_sorted(&self.knot_coords(&fa, &fb, false));
        let xs = merge_sorted(vec![own, inner, pulled, at_ints]);
        let ys_in = self.eval_sorted(&xs);
        let ys_out = self.eval_sorted(&f.eval_sorted(&xs));
        let pts = ys_in.into_iter().zip(ys_out).collect();
        let seg = Segments::from_points(pts, is_int).expect("conjugate of PL2 maps is PL2");
        Self::canonical(lo, hi, seg)
    }

    pub fn invert(&self) -> PeriodicTailMap {
        let lo = self.eval(&int(self.lo)).floor_i64();
        let hi = self.eval(&int(self.hi)).ceil_i64();
        let (a, b) = (int(lo - 1), int(hi + 1));
        let ys = self.knot_coords(&a, &b, true);
        let ints: Vec<Dyadic> = (lo - 1..=hi + 1).map(int).collect();
        let ys = merge_sorted(vec![ys, ints]);
        let xs = self.eval_inv_sorted(&ys);
        let pts = ys.into_iter().zip(xs).collect();
        let seg = Segments::from_points(pts, is_int).expect("inverse of a PL2 map is PL2");
        Self::canonical(lo, hi, seg)
    }

    /// Knots of the map on an arbitrary interval `[a, b]`.
    pub fn restrict(&self, a: &Dyadic, b: &Dyadic) -> Segments {
        let xs = merge_sorted(vec![self.knot_coords(a, b, false), vec![a.clone(), b.clone()]]);
        let ys = self.eval_sorted(&xs);
        Segments::from_points(xs.into_iter().zip(ys).collect(), |_| false).unwrap()
    }
}

impl fmt::Debug for PeriodicTailMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicTailMap{{window [{}, {}]:", self.lo, self.hi)?;
        for (x, y) in self.seg.knots() {
            write!(f, " {x}->{y}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn beta() -> PeriodicTailMap {
        // t on (-inf, 0], t/2 on [0, 2], t - 1 on [2, inf)
        PeriodicTailMap::new(
            0,
            2,
            vec![(d("-1"), d("-1")), (d("0"), d("0")), (d("2"), d("1")), (d("3"), d("2"))],
        )
        .unwrap()
    }

    #[test]
    fn translation_and_tails() {
        let a = PeriodicTailMap::translation(-1);
        assert_eq!(a.eval(&d("3/4")), d("-1/4"));
        assert_eq!(a.eval(&d("-100")), d("-101"));
        let b = beta();
        assert_eq!(b.eval(&d("1")), d("1/2"));
        assert_eq!(b.eval(&d("3")), d("2"));
        assert_eq!(b.eval(&d("-7/2")), d("-7/2"));
        assert_eq!(b.eval(&d("21/2")), d("19/2"));
        assert_eq!(b.eval_inv(&d("19/2")), d("21/2"));
    }

    #[test]
    fn window_is_tightened() {
        // Translation handed in with a needlessly wide window.
        let t = PeriodicTailMap::new(-3, 4, vec![(d("-4"), d("-2")), (d("5"), d("7"))]).unwrap();
        assert_eq!(t, PeriodicTailMap::translation(2));
        assert_eq!(t.window(), (0, 0));
        assert_eq!(beta().window(), (0, 2));
    }

    #[test]
    fn compose_and_invert() {
        let a = PeriodicTailMap::translation(-1);
        let b = beta();
        assert_eq!(a.compose(&b).eval(&d("2")), d("0"));
        assert!(b.compose(&b.invert()).is_identity());
        assert!(b.invert().compose(&b).is_identity());
        assert_eq!(b.invert().invert(), b);
        let c = a.compose(&b).compose(&a.invert());
        for x in ["-5", "-1/2", "1/3", "5/2", "17/4"] {
            if let Ok(x) = x.parse::<Dyadic>() {
                let expect = a.eval(&b.eval(&a.eval_inv(&x)));
                assert_eq!(c.eval(&x), expect);
            }
        }
    }

    #[test]
    fn conjugate_matches_two_compositions() {
        let b = beta();
        let t = PeriodicTailMap::new(0, 1, vec![
            (d("-1"), d("-1")),
            (d("0"), d("0")),
            (d("1/2"), d("1/4")),
            (d("3/4"), d("1/2")),
            (d("1"), d("1")),
            (d("2"), d("2")),
        ]).unwrap();
        let p = PeriodicTailMap::new(
            0,
            0,
            vec![(d("-1"), d("-1")), (d("-1/2"), d("-3/4")), (d("-1/4"), d("-1/2")), (d("0"), d("0")), (d("1"), d("1"))],
        )
        .unwrap();
        for (m, f) in [(&b, &t), (&t, &b), (&b, &b), (&p, &b), (&b, &p), (&t, &p), (&p, &t)] {
            assert_eq!(m.conjugate(f), m.compose(f).compose(&m.invert()));
        }
    }

    #[test]
    fn periodic_tail_that_is_not_a_translation() {
        // Left tail repeats an x0-shaped period; identity on the right.
        let m = PeriodicTailMap::new(
            0,
            0,
            vec![
                (d("-1"), d("-1")),
                (d("-1/2"), d("-3/4")),
                (d("-1/4"), d("-1/2")),
                (d("0"), d("0")),
                (d("1"), d("1")),
            ],
        )
        .unwrap();
        assert_eq!(m.window(), (0, 0));
        assert_eq!(m.eval(&d("-11/4")), d("-23/8"));
        assert_eq!(m.eval(&d("5/4")), d("5/4"));
        let inv = m.invert();
        assert!(m.compose(&inv).is_identity());
        let xs: Vec<Dyadic> = ["-31/4", "-7", "-13/2", "-11/4", "-5/2", "-1/8", "3", "17/2"].iter().map(|s| d(s)).collect();
        let ys = m.eval_sorted(&xs);
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(&m.eval(x), y);
        }
        assert_eq!(m.eval_inv_sorted(&ys), xs);
        assert!(!m.is_globally_periodic());
    }
}
