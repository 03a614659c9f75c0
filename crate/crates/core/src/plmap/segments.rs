use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

pub type Knot = (Dyadic, Dyadic);

/// A continuous, strictly increasing PL function on a closed interval,
/// stored as its knots and the slope exponent of each segment.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Segments {
    knots: Vec<Knot>,
    slopes: Vec<i64>,
}

impl Segments {
    /// Builds from points sorted by `x`. Duplicated `x` values are merged,
    /// collinear interior knots are dropped unless `keep(x)` holds.
    pub fn from_points(points: Vec<Knot>, keep: impl Fn(&Dyadic) -> bool) -> Result<Self> {
        let mut pts: Vec<Knot> = Vec::with_capacity(points.len());
        for p in points {
            match pts.last() {
                Some(last) if last.0 == p.0 => {
                    if last.1 != p.1 {
                        return Err(Error::InvalidMap(format!(
                            "two values {} and {} at x = {}",
                            last.1, p.1, p.0
                        )));
                    }
                }
                Some(last) if last.0 > p.0 => {
                    return Err(Error::InvalidMap("knots out of order".into()));
                }
                _ => pts.push(p),
            }
        }
        if pts.len() < 2 {
            return Err(Error::InvalidMap("need at least two knots".into()));
        }
        let mut slopes = Vec::with_capacity(pts.len() - 1);
        for w in pts.windows(2) {
            slopes.push(slope_between(&w[0], &w[1])?);
        }
        let n = pts.len();
        let mut knots = Vec::with_capacity(n);
        let mut kept_slopes = Vec::with_capacity(n - 1);
        for (i, p) in pts.into_iter().enumerate() {
            if i > 0 && i + 1 < n && slopes[i - 1] == slopes[i] && !keep(&p.0) {
                continue;
            }
            if i > 0 {
                kept_slopes.push(slopes[i - 1]);
            }
            knots.push(p);
        }
        Ok(Segments { knots, slopes: kept_slopes })
    }

    pub fn identity_on(a: Dyadic, b: Dyadic) -> Self {
        assert!(a < b);
        Segments { knots: vec![(a.clone(), a), (b.clone(), b)], slopes: vec![0] }
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    pub fn start(&self) -> &Knot {
        &self.knots[0]
    }

    pub fn end(&self) -> &Knot {
        self.knots.last().unwrap()
    }

    /// Interior knot abscissae.
    pub fn breakpoints(&self) -> impl Iterator<Item = &Dyadic> {
        self.knots[1..self.knots.len() - 1].iter().map(|k| &k.0)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.start().0 <= x && x <= &self.end().0
    }

    /// Value at `x`, or `None` outside the stored interval.
    pub fn eval(&self, x: &Dyadic) -> Option<Dyadic> {
        if !self.contains(x) {
            return None;
        }
        let i = self.knots.partition_point(|k| &k.0 <= x).saturating_sub(1);
        let i = i.min(self.slopes.len() - 1);
        let (x0, y0) = &self.knots[i];
        Some(y0 + (x - x0).mul_pow2(self.slopes[i]))
    }

    pub fn eval_inv(&self, y: &Dyadic) -> Option<Dyadic> {
        if y < &self.start().1 || y > &self.end().1 {
            return None;
        }
        let i = self.knots.partition_point(|k| &k.1 <= y).saturating_sub(1);
        let i = i.min(self.slopes.len() - 1);
        let (x0, y0) = &self.knots[i];
        Some(x0 + (y - y0).mul_pow2(-self.slopes[i]))
    }

    /// Values at ascending points inside the stored interval, by a single
    /// sweep over the knots.
    pub fn eval_sorted<'a>(&self, xs: impl IntoIterator<Item = &'a Dyadic>) -> Vec<Dyadic> {
        sweep(&self.knots, &self.slopes, xs, false)
    }

    /// Preimages of ascending values inside the stored range.
    pub fn eval_inv_sorted<'a>(&self, ys: impl IntoIterator<Item = &'a Dyadic>) -> Vec<Dyadic> {
        sweep(&self.knots, &self.slopes, ys, true)
    }

    /// The inverse function (x and y swapped).
    /// `eval` (or `eval_inv`) at ascending points, using only the knots
    /// `first..=last`.
    pub(crate) fn sweep_range<'a>(
        &self,
        first: usize,
        last: usize,
        pts: impl IntoIterator<Item = &'a Dyadic>,
        inverse: bool,
    ) -> Vec<Dyadic> {
        sweep(&self.knots[first..=last], &self.slopes[first..last], pts, inverse)
    }

    pub fn inverse(&self) -> Segments {
        Segments {
            knots: self.knots.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            slopes: self.slopes.iter().map(|s| -s).collect(),
        }
    }

    pub fn translate(&self, dx: &Dyadic, dy: &Dyadic) -> Segments {
        Segments {
            knots: self.knots.iter().map(|(x, y)| (x + dx, y + dy)).collect(),
            slopes: self.slopes.clone(),
        }
    }

    /// Knots with `a <= x <= b`, as a slice.
    pub fn knots_between(&self, a: &Dyadic, b: &Dyadic) -> &[Knot] {
        let lo = self.knots.partition_point(|k| &k.0 < a);
        let hi = self.knots.partition_point(|k| &k.0 <= b);
        &self.knots[lo..hi.max(lo)]
    }

    /// Is there a knot strictly inside `(a, b)`?
    pub fn has_knot_inside(&self, a: &Dyadic, b: &Dyadic) -> bool {
        let i = self.knots.partition_point(|k| &k.0 <= a);
        i < self.knots.len() && &self.knots[i].0 < b
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }
}

fn slope_between(p: &Knot, q: &Knot) -> Result<i64> {
    let dx = &q.0 - &p.0;
    let dy = &q.1 - &p.1;
    if dx.signum() <= 0 || dy.signum() <= 0 {
        return Err(Error::InvalidMap(format!(
            "map is not strictly increasing between x = {} and x = {}",
            p.0, q.0
        )));
    }
    dy.pow2_ratio(&dx).ok_or_else(|| {
        Error::InvalidMap(format!("slope {dy}/({dx}) on [{}, {}] is not a power of 2", p.0, q.0))
    })
}

fn sweep<'a>(knots: &[Knot], slopes: &[i64], pts: impl IntoIterator<Item = &'a Dyadic>, inverse: bool) -> Vec<Dyadic> {
    let mut out = Vec::new();
    let mut i = 0;
    for p in pts {
        if inverse {
            while i + 1 < slopes.len() && &knots[i + 1].1 <= p {
                i += 1;
            }
            let (x0, y0) = &knots[i];
            out.push(x0 + &(p - y0).mul_pow2(-slopes[i]));
        } else {
            while i + 1 < slopes.len() && &knots[i + 1].0 <= p {
                i += 1;
            }
            let (x0, y0) = &knots[i];
            out.push(y0 + &(p - x0).mul_pow2(slopes[i]));
        }
    }
    out
}

/// Sorted union of sorted lists, without duplicates.
pub(crate) fn merge_sorted(lists: Vec<Vec<Dyadic>>) -> Vec<Dyadic> {
    lists.into_iter().fold(Vec::new(), merge_two)
}

fn merge_two(a: Vec<Dyadic>, b: Vec<Dyadic>) -> Vec<Dyadic> {
    let mut out: Vec<Dyadic> = Vec::with_capacity(a.len() + b.len());
    let mut push = |x: Dyadic| {
        if out.last() != Some(&x) {
            out.push(x);
        }
    };
    let (mut a, mut b) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        let take_a = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => x <= y,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        push(if take_a { a.next() } else { b.next() }.unwrap());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn pts(v: &[(&str, &str)]) -> Vec<Knot> {
        v.iter().map(|(x, y)| (d(x), d(y))).collect()
    }

    #[test]
    fn collinear_knots_merge() {
        let s = Segments::from_points(pts(&[("0", "0"), ("1/4", "1/4"), ("1", "1")]), |_| false)
            .unwrap();
        assert_eq!(s.len(), 2);
        let kept =
            Segments::from_points(pts(&[("0", "0"), ("1/4", "1/4"), ("1", "1")]), |x| x == &d("1/4"))
                .unwrap();
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn rejects_bad_slopes_and_order() {
        assert!(Segments::from_points(pts(&[("0", "0"), ("1/2", "3/8"), ("1", "1")]), |_| false)
            .is_err());
        assert!(Segments::from_points(pts(&[("0", "1"), ("1", "0")]), |_| false).is_err());
    }

    #[test]
    fn eval_and_inverse() {
        let s = Segments::from_points(
            pts(&[("0", "0"), ("1/2", "1/4"), ("3/4", "1/2"), ("1", "1")]),
            |_| false,
        )
        .unwrap();
        assert_eq!(s.eval(&d("1/4")), Some(d("1/8")));
        assert_eq!(s.eval(&d("5/8")), Some(d("3/8")));
        assert_eq!(s.eval(&d("3/2")), None);
        assert_eq!(s.eval_inv(&d("3/8")), Some(d("5/8")));
        assert_eq!(s.inverse().eval(&d("1/8")), Some(d("1/4")));
    }
}
