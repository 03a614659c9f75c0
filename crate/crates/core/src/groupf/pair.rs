use std::fmt;

use super::tree::Tree;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::plmap::IntervalMap;

/// An element of F as a reduced tree pair: leaf `i` of the domain tree is
/// mapped affinely onto leaf `i` of the range tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePair {
    domain: Tree,
    range: Tree,
}

/// Leaf record used while reducing: depth and start exponent in each tree.
#[derive(Clone, Copy)]
struct Slot {
    dd: u32,
    de: u32,
    rd: u32,
    re: u32,
}

impl Slot {
    fn is_left(depth: u32, exp: u32) -> bool {
        depth > 0 && exp < depth
    }
}

/// Removes all common carets. Inputs must be valid trees of equal size.
pub(crate) fn reduce_depths(dom: Vec<u32>, rng: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
    let de = Tree::from_depths_unchecked(dom.clone()).start_exponents();
    let re = Tree::from_depths_unchecked(rng.clone()).start_exponents();
    let mut stack: Vec<Slot> = Vec::with_capacity(dom.len());
    for i in 0..dom.len() {
        stack.push(Slot { dd: dom[i], de: de[i], rd: rng[i], re: re[i] });
        while stack.len() >= 2 {
            let b = stack[stack.len() - 1];
            let a = stack[stack.len() - 2];
            if a.dd == b.dd && a.rd == b.rd && Slot::is_left(a.dd, a.de) && Slot::is_left(a.rd, a.re) {
                stack.pop();
                let top = stack.last_mut().unwrap();
                top.dd -= 1;
                top.rd -= 1;
            } else {
                break;
            }
        }
    }
    stack.into_iter().map(|s| (s.dd, s.rd)).unzip()
}

impl TreePair {
    pub fn identity() -> Self {
        TreePair { domain: Tree::leaf(), range: Tree::leaf() }
    }

    /// Builds and reduces a pair.
    pub fn new(domain: Tree, range: Tree) -> Result<Self> {
        if domain.leaf_count() != range.leaf_count() {
            return Err(Error::LengthMismatch { expected: domain.leaf_count(), got: range.leaf_count() });
        }
        let (d, r) = reduce_depths(domain.depths().to_vec(), range.depths().to_vec());
        Ok(Self::from_reduced(d, r))
    }

    pub(crate) fn from_reduced(d: Vec<u32>, r: Vec<u32>) -> Self {
        TreePair { domain: Tree::from_depths_unchecked(d), range: Tree::from_depths_unchecked(r) }
    }

    /// The generator `x_n`.
    pub fn x(n: u32) -> Self {
        let mut d: Vec<u32> = (1..=n).collect();
        let mut r = d.clone();
        d.extend([n + 1, n + 2, n + 2]);
        r.extend([n + 2, n + 2, n + 1]);
        Self::from_reduced(d, r)
    }

    pub fn domain(&self) -> &Tree {
        &self.domain
    }

    pub fn range(&self) -> &Tree {
        &self.range
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.leaf_count()
    }

    pub fn is_identity(&self) -> bool {
        self.domain.leaf_count() == 1
    }

    pub fn invert(&self) -> TreePair {
        TreePair { domain: self.range.clone(), range: self.domain.clone() }
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn multiply(&self, other: &TreePair) -> TreePair {
        let (d, r) = compose_depths(
            other.domain.depths(),
            other.range.depths(),
            self.domain.depths(),
            self.range.depths(),
        );
        let (d, r) = reduce_depths(d, r);
        Self::from_reduced(d, r)
    }

    pub fn pow(&self, e: i64) -> TreePair {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut acc = TreePair::identity();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.multiply(&sq);
            }
        }
        acc
    }

    pub fn to_plmap(&self) -> IntervalMap {
        let xs = self.domain.endpoints();
        let ys = self.range.endpoints();
        IntervalMap::from_points(xs.into_iter().zip(ys).collect()).expect("tree pair maps are PL2")
    }

    pub fn from_plmap(f: &IntervalMap) -> TreePair {
        let seg = f.segments();
        let (knots, slopes) = (seg.knots(), seg.slopes());
        let mut dom = Vec::new();
        let mut rng = Vec::new();
        // Depth-first over standard intervals, left to right, so the
        // segment under the left end only moves forward.
        let mut i = 0;
        let mut work: Vec<(Dyadic, u32)> = vec![(Dyadic::zero(), 0)];
        while let Some((s, d)) = work.pop() {
            while i + 1 < slopes.len() && knots[i + 1].0 <= s {
                i += 1;
            }
            let e = &s + &Dyadic::pow2(-(d as i64));
            if knots[i + 1].0 >= e {
                let (x0, y0) = &knots[i];
                let fs = y0 + &(&s - x0).mul_pow2(slopes[i]);
                let len_exp = slopes[i] - d as i64;
                if len_exp <= 0 && fs.exponent() as i64 <= -len_exp {
                    dom.push(d);
                    rng.push((-len_exp) as u32);
                    continue;
                }
            }
            let mid = &s + &Dyadic::pow2(-(d as i64) - 1);
            work.push((mid, d + 1));
            work.push((s, d + 1));
        }
        let (d, r) = reduce_depths(dom, rng);
        Self::from_reduced(d, r)
    }

    /// Evaluates the map at a point of `[0, 1]`.
    pub fn eval(&self, x: &Dyadic) -> Result<Dyadic> {
        self.to_plmap().eval(x)
    }
}

/// Common refinement of two leaf-depth sequences: for each piece, its
/// depth and the leaves of `a` and `b` containing it.
pub(crate) fn refine(a: &[u32], b: &[u32]) -> Vec<(u32, usize, usize)> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0usize, 0usize);
    // Pending pieces of the current leaf on each side, next piece last.
    let mut a_pend: Vec<u32> = Vec::new();
    let mut b_pend: Vec<u32> = Vec::new();
    while i < a.len() || !a_pend.is_empty() {
        let x = a_pend.pop().unwrap_or_else(|| {
            i += 1;
            a[i - 1]
        });
        let y = b_pend.pop().unwrap_or_else(|| {
            j += 1;
            b[j - 1]
        });
        let s = x.max(y);
        let (pend, from) = if x < y { (&mut a_pend, x) } else { (&mut b_pend, y) };
        pend.extend(from + 1..=s);
        out.push((s, i - 1, j - 1));
    }
    out
}

/// Depth sequences of `p ∘ q` before reduction, where `q` is given by
/// `(qd, qr)` and `p` by `(pd, pr)`.
fn compose_depths(qd: &[u32], qr: &[u32], pd: &[u32], pr: &[u32]) -> (Vec<u32>, Vec<u32>) {
    refine(qr, pd)
        .into_iter()
        .map(|(s, k, m)| (s + qd[k] - qr[k], s + pr[m] - pd[m]))
        .unzip()
}

impl fmt::Debug for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreePair({} -> {})", self.domain, self.range)
    }
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain, self.range)
    }
}
