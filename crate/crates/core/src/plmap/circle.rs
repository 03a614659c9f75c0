use std::fmt;

use super::periodic::PeriodicTailMap;
use super::segments::{Knot, Segments};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A PL₂ homeomorphism of the circle ℝ/ℤ, stored as the degree-one lift
/// on `[0, 1]` normalised so that `f(0) ∈ [0, 1)`. `0` and `1` are always
/// knots; the other knots are genuine breakpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircleMap {
    seg: Segments,
}

fn is_end(x: &Dyadic) -> bool {
    x.is_zero() || *x == Dyadic::one()
}

impl CircleMap {
    pub fn identity() -> Self {
        CircleMap { seg: Segments::identity_on(Dyadic::zero(), Dyadic::one()) }
    }

    /// Lift knots on `[0, 1]` with `f(1) = f(0) + 1`; any integer shift of
    /// the lift is accepted and normalised away.
    pub fn from_lift(points: Vec<Knot>) -> Result<Self> {
        let seg = Segments::from_points(points, is_end)?;
        let (x0, y0) = seg.start();
        let (x1, y1) = seg.end();
        if !x0.is_zero() || *x1 != Dyadic::one() || (y1 - y0) != Dyadic::one() {
            return Err(Error::InvalidMap("circle lift must satisfy f(1) = f(0) + 1 on [0, 1]".into()));
        }
        let shift = Dyadic::from(-y0.floor());
        Ok(CircleMap { seg: seg.translate(&Dyadic::zero(), &shift) })
    }

    /// The circle map induced by a map that commutes with unit translation
    /// on `[a, a + 1]` (a tail period piece).
    pub fn from_period_piece(piece: &Segments) -> Result<Self> {
        let a = piece.start().0.clone();
        if !a.is_integer() || piece.end().0 != &a + &Dyadic::one() {
            return Err(Error::InvalidMap("period piece must span [n, n + 1]".into()));
        }
        let shift = -a;
        Self::from_lift(piece.translate(&shift, &Dyadic::zero()).knots().to_vec())
    }

    pub fn segments(&self) -> &Segments {
        &self.seg
    }

    pub fn lift_at_zero(&self) -> &Dyadic {
        &self.seg.start().1
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        self.seg
            .knots()
            .windows(3)
            .zip(self.seg.slopes().windows(2))
            .filter(|(_, s)| s[0] != s[1])
            .map(|(w, _)| w[1].0.clone())
            .collect()
    }

    /// The lift as a globally periodic line map.
    pub fn to_periodic(&self) -> PeriodicTailMap {
        let one = Dyadic::one();
        let mut pts: Vec<Knot> = self.seg.knots().iter().map(|(x, y)| (x - &one, y - &one)).collect();
        pts.extend(self.seg.knots().iter().skip(1).cloned());
        PeriodicTailMap::new(0, 0, pts).expect("a circle lift is periodic")
    }

    pub fn from_periodic(m: &PeriodicTailMap) -> Result<Self> {
        if !m.is_globally_periodic() {
            return Err(Error::InvalidMap("not a lift of a circle map".into()));
        }
        Self::from_period_piece(&m.right_piece())
    }

    /// Value of the lift at any dyadic.
    pub fn eval_lift(&self, x: &Dyadic) -> Dyadic {
        let k = x.floor();
        let kd = Dyadic::from(k);
        self.seg.eval(&(x - &kd)).unwrap() + kd
    }

    /// Value on the circle, in `[0, 1)`.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        let y = self.eval_lift(x);
        let f = Dyadic::from(y.floor());
        y - f
    }

    pub fn compose(&self, inner: &CircleMap) -> CircleMap {
        let m = self.to_periodic().compose(&inner.to_periodic());
        Self::from_periodic(&m).expect("composite of circle lifts is a circle lift")
    }

    pub fn invert(&self) -> CircleMap {
        Self::from_periodic(&self.to_periodic().invert()).expect("inverse of a circle lift")
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl fmt::Debug for CircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircleMap[")?;
        for (i, (x, y)) in self.seg.knots().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn rot_half() -> CircleMap {
        CircleMap::from_lift(vec![(d("0"), d("1/2")), (d("1"), d("3/2"))]).unwrap()
    }

    #[test]
    fn rotation_by_half_has_order_two() {
        let r = rot_half();
        assert_eq!(r.eval(&d("3/4")), d("1/4"));
        assert!(!r.is_identity());
        assert!(r.compose(&r).is_identity());
    }

    #[test]
    fn lift_is_normalised() {
        let a = CircleMap::from_lift(vec![(d("0"), d("5/2")), (d("1"), d("7/2"))]).unwrap();
        assert_eq!(a, rot_half());
        assert_eq!(a.lift_at_zero(), &d("1/2"));
    }

    #[test]
    fn inverse_and_periodic_round_trip() {
        let c = CircleMap::from_lift(vec![
            (d("0"), d("3/4")),
            (d("1/2"), d("1")),
            (d("3/4"), d("3/2")),
            (d("1"), d("7/4")),
        ])
        .unwrap();
        assert!(c.compose(&c.invert()).is_identity());
        assert_eq!(CircleMap::from_periodic(&c.to_periodic()).unwrap(), c);
        assert!(c.compose(&c).compose(&c).is_identity());
    }
}
