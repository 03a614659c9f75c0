use super::segments::{Knot, Segments};
use crate::dyadic::Dyadic;

/// Minimal decomposition of `[a, b]` into standard dyadic intervals
/// `[m/2^j, (m+1)/2^j]`, left to right. Returns the left endpoints and
/// the length exponents.
pub fn standard_pieces(a: &Dyadic, b: &Dyadic) -> Vec<(Dyadic, i64)> {
    let mut out = Vec::new();
    let mut x = a.clone();
    while &x < b {
        let room = (b - &x).floor_log2();
        let p = match x.valuation() {
            Some(v) => room.min(v),
            None => room,
        };
        let next = &x + &Dyadic::pow2(p);
        out.push((x, p));
        x = next;
    }
    out
}

fn split_widest(v: &mut Vec<(Dyadic, i64)>) {
    let (i, _) = v.iter().enumerate().max_by(|p, q| p.1 .1.cmp(&q.1 .1).then(q.0.cmp(&p.0))).unwrap();
    let (x, p) = v[i].clone();
    let mid = &x + &Dyadic::pow2(p - 1);
    v[i] = (x, p - 1);
    v.insert(i + 1, (mid, p - 1));
}

/// A PL₂ map of `[a, b]` onto `[c, d]`.
pub fn interpolate(a: &Dyadic, b: &Dyadic, c: &Dyadic, d: &Dyadic) -> Segments {
    assert!(a < b && c < d, "interpolate needs non-degenerate intervals");
    let mut src = standard_pieces(a, b);
    let mut dst = standard_pieces(c, d);
    while src.len() != dst.len() {
        if src.len() < dst.len() {
            split_widest(&mut src);
        } else {
            split_widest(&mut dst);
        }
    }
    let mut pts: Vec<Knot> = src.iter().zip(&dst).map(|(s, t)| (s.0.clone(), t.0.clone())).collect();
    pts.push((b.clone(), d.clone()));
    Segments::from_points(pts, |_| false).expect("standard pieces map with power-of-2 slopes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn small_cases() {
        let id = interpolate(&d("0"), &d("1"), &d("0"), &d("1"));
        assert_eq!(id, Segments::identity_on(d("0"), d("1")));
        let half = interpolate(&d("0"), &d("1"), &d("0"), &d("1/2"));
        assert_eq!(half.slopes(), &[-1]);
        let three = interpolate(&d("0"), &d("1"), &d("0"), &d("3/4"));
        assert_eq!(three.len(), 3);
        assert_eq!(three.eval(&d("1/2")), Some(d("1/2")));
        assert_eq!(three.eval(&d("1")), Some(d("3/4")));
    }

    #[test]
    fn pieces_are_standard_and_minimal() {
        let p = standard_pieces(&d("1/8"), &d("7/4"));
        let lens: Vec<i64> = p.iter().map(|q| q.1).collect();
        assert_eq!(lens, vec![-3, -2, -1, -1, -2]);
    }

    fn dy() -> impl Strategy<Value = Dyadic> {
        (-200i64..200, 0u32..6).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    proptest! {
        #[test]
        fn interpolation_is_onto_and_invertible(a in dy(), w in dy(), c in dy(), v in dy()) {
            prop_assume!(w.signum() != 0 && v.signum() != 0);
            let b = &a + &w.abs();
            let d = &c + &v.abs();
            let s = interpolate(&a, &b, &c, &d);
            prop_assert_eq!(s.start(), &(a.clone(), c.clone()));
            prop_assert_eq!(s.end(), &(b.clone(), d.clone()));
            let inv = s.inverse();
            for (x, _) in s.knots() {
                prop_assert_eq!(&inv.eval(&s.eval(x).unwrap()).unwrap(), x);
            }
        }
    }
}
