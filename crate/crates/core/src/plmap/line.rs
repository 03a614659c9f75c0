use std::fmt;

use super::periodic::PeriodicTailMap;
use super::segments::Knot;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A PL₂ map of the real line with finitely many breakpoints that is an
/// integer translation on each tail: `x + l` far left, `x + k` far right.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LineMap {
    inner: PeriodicTailMap,
    left: i64,
    right: i64,
}

impl LineMap {
    pub fn identity() -> Self {
        Self::translation(0)
    }

    pub fn translation(c: i64) -> Self {
        LineMap { inner: PeriodicTailMap::translation(c), left: c, right: c }
    }

    /// Knots on `[lo - 1, hi + 1]`; both outer pieces must be slope-1.
    pub fn new(lo: i64, hi: i64, points: Vec<Knot>) -> Result<Self> {
        Self::from_periodic(PeriodicTailMap::new(lo, hi, points)?)
    }

    /// Accepts a tail-periodic map whose tails are integer translations.
    pub fn from_periodic(inner: PeriodicTailMap) -> Result<Self> {
        let left = tail_offset(&inner, true)?;
        let right = tail_offset(&inner, false)?;
        Ok(LineMap { inner, left, right })
    }

    pub fn as_periodic(&self) -> &PeriodicTailMap {
        &self.inner
    }

    pub fn into_periodic(self) -> PeriodicTailMap {
        self.inner
    }

    /// `l` with `f(x) = x + l` for `x <= N`.
    pub fn left_offset(&self) -> i64 {
        self.left
    }

    /// `k` with `f(x) = x + k` for `x >= M`.
    pub fn right_offset(&self) -> i64 {
        self.right
    }

    /// `[N, M]`, the smallest integer window outside which `f` is a translation.
    pub fn window(&self) -> (i64, i64) {
        self.inner.window()
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        let k = self.inner.segments();
        k.knots()
            .windows(3)
            .zip(k.slopes().windows(2))
            .filter(|(_, s)| s[0] != s[1])
            .map(|(w, _)| w[1].0.clone())
            .collect()
    }

    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        self.inner.eval(x)
    }

    pub fn eval_inv(&self, y: &Dyadic) -> Dyadic {
        self.inner.eval_inv(y)
    }

    pub fn compose(&self, inner: &LineMap) -> LineMap {
        LineMap {
            inner: self.inner.compose(&inner.inner),
            left: self.left + inner.left,
            right: self.right + inner.right,
        }
    }

    pub fn invert(&self) -> LineMap {
        LineMap { inner: self.inner.invert(), left: -self.left, right: -self.right }
    }

    pub fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }
}

fn tail_offset(m: &PeriodicTailMap, left: bool) -> Result<i64> {
    let piece = if left { m.left_piece() } else { m.right_piece() };
    if piece.slopes() != [0] {
        return Err(Error::InvalidMap(format!(
            "{} tail of a line map must be a translation",
            if left { "left" } else { "right" }
        )));
    }
    let (x, y) = piece.start();
    let off = y - x;
    if !off.is_integer() {
        return Err(Error::InvalidMap(format!("tail offset {off} is not an integer")));
    }
    Ok(off.floor_i64())
}

impl fmt::Debug for LineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LineMap{{left {:+}, right {:+}, {:?}}}", self.left, self.right, self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_periodic_tails() {
        let r = LineMap::new(
            0,
            0,
            vec![(d("-1"), d("-1")), (d("-1/2"), d("-3/4")), (d("-1/4"), d("-1/2")), (d("0"), d("0")), (d("1"), d("1"))],
        );
        assert!(r.is_err());
    }

    #[test]
    fn offsets_add_under_composition() {
        let beta = LineMap::new(
            0,
            2,
            vec![(d("-1"), d("-1")), (d("0"), d("0")), (d("2"), d("1")), (d("3"), d("2"))],
        )
        .unwrap();
        assert_eq!((beta.left_offset(), beta.right_offset()), (0, -1));
        assert_eq!(beta.breakpoints(), vec![d("0"), d("2")]);
        let alpha = LineMap::translation(-1);
        let ab = alpha.compose(&beta);
        assert_eq!((ab.left_offset(), ab.right_offset()), (-1, -2));
        assert_eq!(ab.eval(&d("2")), d("0"));
        assert!(beta.compose(&beta.invert()).is_identity());
    }
}
