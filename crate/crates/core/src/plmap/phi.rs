//! The conjugation between PL₂ maps of `[0, 1]` and PL₂ maps of the line.
//!
//! `φ : ℝ → (0, 1)` is affine on every `[n, n + 1]` with
//! `φ(n) = 1 - 2^(-n-1)` for `n >= 0` and `φ(n) = 2^(n-1)` for `n <= 0`.
//! It is only ever applied pointwise.

use std::cmp::{max, min};

use super::interval::IntervalMap;
use super::line::LineMap;
use super::segments::Knot;
use crate::dyadic::Dyadic;

fn phi_int(n: i64) -> Dyadic {
    if n >= 0 {
        Dyadic::one() - Dyadic::pow2(-n - 1)
    } else {
        Dyadic::pow2(n - 1)
    }
}

/// Slope exponent of φ on `[n, n + 1]`.
fn phi_slope(n: i64) -> i64 {
    if n >= 0 {
        -n - 2
    } else {
        n - 1
    }
}

pub fn phi(x: &Dyadic) -> Dyadic {
    let n = x.floor_i64();
    phi_int(n) + (x - &Dyadic::from_int(n)).mul_pow2(phi_slope(n))
}

/// Inverse of φ; `y` must lie in the open interval `(0, 1)`.
pub fn phi_inv(y: &Dyadic) -> Dyadic {
    assert!(y.signum() > 0 && y < &Dyadic::one(), "phi_inv outside (0, 1): {y}");
    let half = Dyadic::pow2(-1);
    let n = if y >= &half {
        let z = Dyadic::one() - y;
        -z.floor_log2() - 2
    } else {
        y.floor_log2() + 1
    };
    Dyadic::from_int(n) + (y - &phi_int(n)).mul_pow2(-phi_slope(n))
}

/// `φ⁻¹ ∘ f ∘ φ`.
pub fn phi_to_line(f: &IntervalMap) -> LineMap {
    let seg = f.segments();
    let slopes = seg.slopes();
    let l = slopes[0];
    let k = slopes[slopes.len() - 1];
    let bps = f.breakpoints();
    let mut lo = min(0, -l);
    let mut hi = max(0, k);
    if let (Some(first), Some(last)) = (bps.first(), bps.last()) {
        lo = min(lo, phi_inv(first).floor_i64());
        hi = max(hi, phi_inv(last).ceil_i64());
    }
    let mut xs: Vec<Dyadic> = (lo - 1..=hi + 1).map(Dyadic::from_int).collect();
    xs.extend(bps.iter().map(phi_inv));
    let (ga, gb) = (lo - 1 + l, hi + 1 - k);
    let ticks: Vec<Dyadic> = (ga..=gb).map(phi_int).collect();
    xs.extend(seg.eval_inv_sorted(&ticks).iter().map(phi_inv));
    let (a, b) = (Dyadic::from_int(lo - 1), Dyadic::from_int(hi + 1));
    xs.retain(|x| &a <= x && x <= &b);
    xs.sort();
    xs.dedup();
    let at: Vec<Dyadic> = xs.iter().map(phi).collect();
    let ys = seg.eval_sorted(&at);
    let pts: Vec<Knot> = xs.into_iter().zip(ys.iter().map(phi_inv)).collect();
    LineMap::new(lo, hi, pts).expect("conjugate of an interval map is a line map")
}

/// `φ ∘ g ∘ φ⁻¹`.
pub fn phi_from_line(g: &LineMap) -> IntervalMap {
    let (lo, hi) = g.window();
    let lo = min(min(lo, 0), -g.left_offset());
    let hi = max(max(hi, 0), -g.right_offset());
    let (a, b) = (Dyadic::from_int(lo), Dyadic::from_int(hi));
    let pm = g.as_periodic();
    let mut xs: Vec<Dyadic> = (lo..=hi).map(Dyadic::from_int).collect();
    if lo < hi {
        xs.extend(pm.restrict(&a, &b).knots().iter().map(|k| k.0.clone()));
    }
    let (ga, gb) = (g.eval(&a).ceil_i64(), g.eval(&b).floor_i64());
    let ints: Vec<Dyadic> = (ga..=gb).map(Dyadic::from_int).collect();
    xs.extend(pm.eval_inv_sorted(&ints));
    xs.sort();
    xs.dedup();
    let ys = pm.eval_sorted(&xs);
    let mut pts: Vec<Knot> = Vec::with_capacity(xs.len() + 2);
    pts.push((Dyadic::zero(), Dyadic::zero()));
    pts.extend(xs.iter().zip(&ys).map(|(x, y)| (phi(x), phi(y))));
    pts.push((Dyadic::one(), Dyadic::one()));
    IntervalMap::from_points(pts).expect("conjugate of a line map is an interval map")
}
