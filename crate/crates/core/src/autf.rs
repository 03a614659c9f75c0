//! Orientation preserving automorphisms of F, realised as PL₂ maps of the
//! line that commute with unit translation near both ends.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::groupf::TreePair;
use crate::groupt::{derived_generators, TElement};
use crate::plmap::{
    interpolate, phi_from_line, phi_to_line, CircleMap, Knot, LineMap, PeriodicTailMap,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AutFMap {
    map: PeriodicTailMap,
}

impl AutFMap {
    pub fn identity() -> Self {
        AutFMap { map: PeriodicTailMap::identity() }
    }

    /// Knots on `[lo - 1, hi + 1]`; the outer unit pieces are the tails.
    pub fn new(lo: i64, hi: i64, points: Vec<Knot>) -> Result<Self> {
        Ok(AutFMap { map: PeriodicTailMap::new(lo, hi, points)? })
    }

    pub fn as_periodic(&self) -> &PeriodicTailMap {
        &self.map
    }

    pub fn window(&self) -> (i64, i64) {
        self.map.window()
    }

    pub fn knots(&self) -> &[Knot] {
        self.map.segments().knots()
    }

    pub fn knot_count(&self) -> usize {
        self.map.knot_count()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity()
    }

    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        self.map.eval(x)
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn compose(&self, other: &AutFMap) -> AutFMap {
        AutFMap { map: self.map.compose(&other.map) }
    }

    pub fn invert(&self) -> AutFMap {
        AutFMap { map: self.map.invert() }
    }

    /// The inclusion of F: conjugation by an element of F.
    pub fn embed_f(f: &TreePair) -> AutFMap {
        AutFMap { map: phi_to_line(&f.to_plmap()).into_periodic() }
    }

    /// The element of F this map comes from, if its tails are translations.
    pub fn to_f(&self) -> Option<TreePair> {
        let line = LineMap::from_periodic(self.map.clone()).ok()?;
        Some(TreePair::from_plmap(&phi_from_line(&line)))
    }

    /// `(a₋, a₊)`: the left and right tails read as maps of the circle.
    pub fn beta_project(&self) -> (TElement, TElement) {
        let left = CircleMap::from_period_piece(&self.map.left_piece()).expect("left tail is periodic");
        let right = CircleMap::from_period_piece(&self.map.right_piece()).expect("right tail is periodic");
        (TElement::from_circle(&left), TElement::from_circle(&right))
    }

    /// A map with `β = (t₋, t₊)`: the periodic lifts near the ends, joined
    /// through the identity on `[0, 1]`.
    pub fn lift(t_minus: &TElement, t_plus: &TElement) -> AutFMap {
        let lm = t_minus.to_circle();
        let lp = t_plus.to_circle();
        let one = Dyadic::one();
        // t̃₋(-1) = lm(0) - 1 ∈ [-1, 0)
        let left: Vec<Knot> = lm
            .segments()
            .knots()
            .iter()
            .map(|(x, y)| (x - &Dyadic::from_int(2), y - &Dyadic::from_int(2)))
            .collect();
        // t̃₊(2) ∈ (1, 2]
        let shift = if lp.lift_at_zero().is_zero() { 2 } else { 1 };
        let right: Vec<Knot> = lp
            .segments()
            .knots()
            .iter()
            .map(|(x, y)| (x + &Dyadic::from_int(2), y + &Dyadic::from_int(shift)))
            .collect();
        let lm1 = left.last().unwrap().1.clone();
        let rp2 = right[0].1.clone();
        let mut pts = left;
        pts.extend(interpolate(&-&one, &Dyadic::zero(), &lm1, &Dyadic::zero()).knots().iter().cloned());
        pts.extend(interpolate(&one, &Dyadic::from_int(2), &one, &rp2).knots().iter().cloned());
        pts.extend(right);
        AutFMap::new(-1, 2, pts).expect("lift data is a valid automorphism")
    }

    /// `self⁻¹ ∘ f ∘ self`, as an element of F.
    pub fn act_on_f(&self, f: &TreePair) -> Result<TreePair> {
        self.invert().conjugate(f)
    }

    /// `self ∘ f ∘ self⁻¹`.
    pub fn conjugate(&self, f: &TreePair) -> Result<TreePair> {
        if f.is_identity() {
            return Ok(TreePair::identity());
        }
        let lf = phi_to_line(&f.to_plmap()).into_periodic();
        let conj = self.map.conjugate(&lf);
        let line = LineMap::from_periodic(conj)
            .map_err(|e| Error::Consistency(format!("conjugate is not in F: {e}")))?;
        Ok(TreePair::from_plmap(&phi_from_line(&line)))
    }
}

/// `(â, b̂, ĉ, d̂)`, lifting `(a, 1), (b, 1), (1, c), (1, d)`.
pub fn hat_generators() -> [AutFMap; 4] {
    let [a, b, c, d] = derived_generators();
    let one = TElement::identity();
    [
        AutFMap::lift(&a, &one),
        AutFMap::lift(&b, &one),
        AutFMap::lift(&one, &c),
        AutFMap::lift(&one, &d),
    ]
}

impl fmt::Debug for AutFMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutFMap({:?})", self.map)
    }
}

#[derive(Serialize, Deserialize)]
struct AutFMapData {
    window: (i64, i64),
    knots: Vec<Knot>,
}

impl Serialize for AutFMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AutFMapData { window: self.window(), knots: self.knots().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AutFMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let data = AutFMapData::deserialize(d)?;
        let m = AutFMap::new(data.window.0, data.window.1, data.knots.clone()).map_err(serde::de::Error::custom)?;
        if m.window() != data.window || m.knots() != data.knots.as_slice() {
            return Err(serde::de::Error::custom("automorphism data is not in normal form"));
        }
        Ok(m)
    }
}
