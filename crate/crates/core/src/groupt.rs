//! Thompson's group T: tree pairs with a cyclic leaf rotation.

use std::fmt;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::groupf::{Tree, TreePair};
use crate::plmap::{CircleMap, Knot};
use crate::syntax;

/// Domain leaf `i` is mapped affinely onto range leaf `(i + rotation) mod n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TElement {
    domain: Tree,
    range: Tree,
    rotation: usize,
}

fn is_left(depth: u32, exp: u32) -> bool {
    depth > 0 && exp < depth
}

/// Leaves `i, i + 1` form a caret.
fn siblings(depths: &[u32], exps: &[u32], i: usize) -> bool {
    depths[i] == depths[i + 1] && is_left(depths[i], exps[i])
}

impl TElement {
    pub fn identity() -> Self {
        TElement { domain: Tree::leaf(), range: Tree::leaf(), rotation: 0 }
    }

    pub fn new(domain: Tree, range: Tree, rotation: usize) -> Result<Self> {
        let n = domain.leaf_count();
        if range.leaf_count() != n {
            return Err(Error::LengthMismatch { expected: n, got: range.leaf_count() });
        }
        if rotation >= n {
            return Err(Error::InvalidMap(format!("rotation {rotation} out of range for {n} leaves")));
        }
        Ok(Self::reduce(domain.depths().to_vec(), range.depths().to_vec(), rotation))
    }

    pub fn from_f(p: &TreePair) -> Self {
        TElement { domain: p.domain().clone(), range: p.range().clone(), rotation: 0 }
    }

    fn reduce(mut dom: Vec<u32>, mut rng: Vec<u32>, mut rot: usize) -> Self {
        'outer: loop {
            let n = dom.len();
            if n == 1 {
                rot = 0;
                break;
            }
            let de = Tree::from_depths(dom.clone()).expect("valid domain").start_exponents();
            let re = Tree::from_depths(rng.clone()).expect("valid range").start_exponents();
            for i in 0..n - 1 {
                let j = (i + rot) % n;
                if j + 1 < n && siblings(&dom, &de, i) && siblings(&rng, &re, j) {
                    dom[i] -= 1;
                    dom.remove(i + 1);
                    rng[j] -= 1;
                    rng.remove(j + 1);
                    rot = (j + (n - 1) - i) % (n - 1);
                    continue 'outer;
                }
            }
            break;
        }
        TElement {
            domain: Tree::from_depths(dom).unwrap(),
            range: Tree::from_depths(rng).unwrap(),
            rotation: rot,
        }
    }

    pub fn domain(&self) -> &Tree {
        &self.domain
    }

    pub fn range(&self) -> &Tree {
        &self.range
    }

    pub fn rotation(&self) -> usize {
        self.rotation
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.leaf_count()
    }

    pub fn is_identity(&self) -> bool {
        self.domain.leaf_count() == 1
    }

    /// Lies in F (fixes 0 with no rotation).
    pub fn to_f(&self) -> Option<TreePair> {
        if self.rotation == 0 {
            TreePair::new(self.domain.clone(), self.range.clone()).ok()
        } else {
            None
        }
    }

    pub fn invert(&self) -> TElement {
        let n = self.leaf_count();
        TElement { domain: self.range.clone(), range: self.domain.clone(), rotation: (n - self.rotation) % n }
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn multiply(&self, other: &TElement) -> TElement {
        let (td, tr, rt) = (other.domain.depths(), other.range.depths(), other.rotation);
        let (sd, sr, rs) = (self.domain.depths(), self.range.depths(), self.rotation);
        let (nt, ns) = (td.len(), sd.len());
        let pieces = crate::groupf::refine(tr, sd);
        let total = pieces.len();
        let mut dom = Vec::with_capacity(total);
        let mut rng = Vec::with_capacity(total);
        for &(s, k, m) in &pieces {
            let kd = (k + nt - rt) % nt;
            let mr = (m + rs) % ns;
            dom.push(s + td[kd] - tr[k]);
            rng.push(s + sr[mr] - sd[m]);
        }
        // Domain order starts at the first piece of range leaf `rt` of
        // `other`; range order at the first piece of domain leaf `-rs` of
        // `self`.
        let p0 = pieces.iter().position(|p| p.1 == rt % nt).unwrap();
        let q0 = pieces.iter().position(|p| p.2 == (ns - rs) % ns).unwrap();
        dom.rotate_left(p0);
        rng.rotate_left(q0);
        let rot = (p0 + total - q0) % total;
        Self::reduce(dom, rng, rot)
    }

    pub fn pow(&self, e: i64) -> TElement {
        let base = if e < 0 { self.invert() } else { self.clone() };
        (0..e.unsigned_abs()).fold(TElement::identity(), |acc, _| acc.multiply(&base))
    }

    pub fn to_circle(&self) -> CircleMap {
        let n = self.leaf_count();
        let xs = self.domain.endpoints();
        let ys = self.range.endpoints();
        let one = Dyadic::one();
        let mut pts: Vec<Knot> = (0..n)
            .map(|i| {
                let j = i + self.rotation;
                let y = if j >= n { &ys[j - n] + &one } else { ys[j].clone() };
                (xs[i].clone(), y)
            })
            .collect();
        let y0 = pts[0].1.clone();
        pts.push((one.clone(), y0 + one));
        CircleMap::from_lift(pts).expect("tree pair diagrams give circle maps")
    }

    pub fn from_circle(f: &CircleMap) -> TElement {
        let seg = f.segments();
        let mut pieces: Vec<(u32, Dyadic, u32)> = Vec::new();
        let mut work: Vec<(Dyadic, u32)> = vec![(Dyadic::zero(), 0)];
        while let Some((s, d)) = work.pop() {
            let e = &s + &Dyadic::pow2(-(d as i64));
            if !seg.has_knot_inside(&s, &e) {
                let fs = seg.eval(&s).unwrap();
                let fe = seg.eval(&e).unwrap();
                let len_exp = (&fe - &fs).floor_log2();
                if len_exp <= 0 && fs.exponent() as i64 <= -len_exp {
                    let start = &fs - &Dyadic::from(fs.floor());
                    pieces.push((d, start, (-len_exp) as u32));
                    continue;
                }
            }
            let mid = &s + &Dyadic::pow2(-(d as i64) - 1);
            work.push((mid, d + 1));
            work.push((s, d + 1));
        }
        let dom: Vec<u32> = pieces.iter().map(|p| p.0).collect();
        let mut order: Vec<usize> = (0..pieces.len()).collect();
        order.sort_by(|&a, &b| pieces[a].1.cmp(&pieces[b].1));
        let rng: Vec<u32> = order.iter().map(|&i| pieces[i].2).collect();
        let rot = order.iter().position(|&i| i == 0).unwrap();
        Self::reduce(dom, rng, rot)
    }

    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        self.to_circle().eval(x)
    }
}

impl fmt::Debug for TElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TElement({} -> {}, rotation {})", self.domain, self.range, self.rotation)
    }
}

/// A letter over `A, B, C` and their inverses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TLetter {
    /// 0 = A, 1 = B, 2 = C.
    pub gen: u8,
    pub inv: bool,
}

pub type TWord = Vec<TLetter>;

/// `(A, B, C)`.
pub fn t_generators() -> (TElement, TElement, TElement) {
    let a = TElement::from_f(&TreePair::x(0));
    let b = TElement::from_f(&TreePair::x(1));
    let t: Tree = "(•,(•,•))".parse().unwrap();
    let c = TElement::new(t.clone(), t, 2).unwrap();
    (a, b, c)
}

impl TLetter {
    pub fn to_element(self) -> TElement {
        let (a, b, c) = t_generators();
        let g = [a, b, c][self.gen as usize].clone();
        if self.inv {
            g.invert()
        } else {
            g
        }
    }
}

/// Parses `A C^2 B^-1 …` (letters are case-insensitive).
pub fn parse_tword(s: &str) -> Result<TWord> {
    let mut w = Vec::new();
    for (name, e) in syntax::tokens(s)? {
        let gen = match name.to_ascii_uppercase().as_str() {
            "A" => 0,
            "B" => 1,
            "C" => 2,
            _ => return Err(Error::Parse(format!("unknown letter {name:?} in a T word"))),
        };
        for _ in 0..e.unsigned_abs() {
            w.push(TLetter { gen, inv: e < 0 });
        }
    }
    Ok(w)
}

/// Product of the letters, leftmost applied last.
pub fn t_word_to_element(w: &[TLetter]) -> TElement {
    let (a, b, c) = t_generators();
    let gens = [a, b, c];
    let inv: Vec<TElement> = gens.iter().map(|g| g.invert()).collect();
    w.iter().fold(TElement::identity(), |acc, l| {
        acc.multiply(if l.inv { &inv[l.gen as usize] } else { &gens[l.gen as usize] })
    })
}

pub fn t_is_identity(w: &[TLetter]) -> bool {
    t_word_to_element(w).is_identity()
}

/// `u = A C² A`, `v = A² C²`.
pub fn free_generators() -> (TElement, TElement) {
    let (a, _, c) = t_generators();
    let u = a.multiply(&c).multiply(&c).multiply(&a);
    let v = a.multiply(&a).multiply(&c).multiply(&c);
    (u, v)
}

/// `a = u², b = v², c = u v u⁻¹, d = v u v⁻¹`.
pub fn derived_generators() -> [TElement; 4] {
    let (u, v) = free_generators();
    let (ui, vi) = (u.invert(), v.invert());
    [
        u.multiply(&u),
        v.multiply(&v),
        u.multiply(&v).multiply(&ui),
        v.multiply(&u).multiply(&vi),
    ]
}
