use std::fmt;

use super::segments::{merge_sorted, Knot, Segments};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A PL₂ homeomorphism of `[0, 1]`: dyadic breakpoints, slopes `2^k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalMap {
    seg: Segments,
}

impl IntervalMap {
    pub fn identity() -> Self {
        IntervalMap { seg: Segments::identity_on(Dyadic::zero(), Dyadic::one()) }
    }

    /// Builds from knots; the list must start at `(0,0)` and end at `(1,1)`.
    pub fn from_points(points: Vec<Knot>) -> Result<Self> {
        let seg = Segments::from_points(points, |_| false)?;
        if seg.start() != &(Dyadic::zero(), Dyadic::zero())
            || seg.end() != &(Dyadic::one(), Dyadic::one())
        {
            return Err(Error::InvalidMap("interval map must fix 0 and 1".into()));
        }
        Ok(IntervalMap { seg })
    }

    pub fn segments(&self) -> &Segments {
        &self.seg
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        self.seg.breakpoints().cloned().collect()
    }

    pub fn slope_exponents(&self) -> &[i64] {
        self.seg.slopes()
    }

    pub fn is_identity(&self) -> bool {
        self.seg.len() == 2
    }

    pub fn eval(&self, x: &Dyadic) -> Result<Dyadic> {
        self.seg.eval(x).ok_or_else(|| Error::Domain(x.to_string()))
    }

    pub fn eval_inv(&self, y: &Dyadic) -> Result<Dyadic> {
        self.seg.eval_inv(y).ok_or_else(|| Error::Domain(y.to_string()))
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn compose(&self, other: &IntervalMap) -> IntervalMap {
        let inner: Vec<Dyadic> = other.seg.knots().iter().map(|k| k.0.clone()).collect();
        let pulled = other.seg.eval_inv_sorted(self.seg.knots().iter().map(|k| &k.0));
        let xs = merge_sorted(vec![inner, pulled]);
        let ys = self.seg.eval_sorted(&other.seg.eval_sorted(&xs));
        let pts = xs.into_iter().zip(ys).collect();
        IntervalMap::from_points(pts).expect("composition of PL2 maps is PL2")
    }

    pub fn invert(&self) -> IntervalMap {
        IntervalMap { seg: self.seg.inverse() }
    }
}

impl fmt::Debug for IntervalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntervalMap[")?;
        for (i, (x, y)) in self.seg.knots().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, "]")
    }
}
