use std::fmt;
use std::str::FromStr;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A finite rooted binary tree, stored as the depths of its leaves from
/// left to right. Leaf `i` is the standard dyadic interval
/// `[s_i, s_i + 2^-d_i]`; the leaves tile `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    depths: Vec<u32>,
}

impl Tree {
    /// The single leaf.
    pub fn leaf() -> Self {
        Tree { depths: vec![0] }
    }

    pub fn caret(left: &Tree, right: &Tree) -> Self {
        let depths = left.depths.iter().chain(&right.depths).map(|d| d + 1).collect();
        Tree { depths }
    }

    /// Validates a leaf-depth sequence.
    pub fn from_depths(depths: Vec<u32>) -> Result<Self> {
        start_exponents(&depths)
            .ok_or_else(|| Error::Malformed(format!("{depths:?} is not a leaf-depth sequence")))?;
        Ok(Tree { depths })
    }

    pub(crate) fn from_depths_unchecked(depths: Vec<u32>) -> Self {
        debug_assert!(start_exponents(&depths).is_some());
        Tree { depths }
    }

    pub fn depths(&self) -> &[u32] {
        &self.depths
    }

    pub fn leaf_count(&self) -> usize {
        self.depths.len()
    }

    pub fn caret_count(&self) -> usize {
        self.depths.len() - 1
    }

    /// Left endpoints of the leaves, followed by 1.
    pub fn endpoints(&self) -> Vec<Dyadic> {
        let mut out = Vec::with_capacity(self.depths.len() + 1);
        let mut s = Dyadic::zero();
        for &d in &self.depths {
            let next = &s + &Dyadic::pow2(-(d as i64));
            out.push(s);
            s = next;
        }
        out.push(s);
        out
    }

    /// For every leaf, the power of 2 in the denominator of its left endpoint.
    pub fn start_exponents(&self) -> Vec<u32> {
        start_exponents(&self.depths).expect("validated on construction")
    }

    /// Exponent of each leaf in the normal form: the length of the run of
    /// left edges ending at the leaf, not counting edges that leave the
    /// right spine of the tree.
    pub fn leaf_exponents(&self) -> Vec<u32> {
        // slot: (depth, on right spine, run length)
        let mut stack: Vec<(u32, bool, u32)> = vec![(0, true, 0)];
        let mut out = Vec::with_capacity(self.depths.len());
        for &d in &self.depths {
            let (mut t, mut spine, mut run) = stack.pop().unwrap();
            while t < d {
                stack.push((t + 1, spine, 0));
                run = if spine { 0 } else { run + 1 };
                spine = false;
                t += 1;
            }
            out.push(run);
        }
        out
    }
}

/// Dense exponent sequence of a sparse `(leaf, exponent)` list.
fn dense(part: &[(u32, u32)]) -> Vec<u32> {
    let len = part.last().map_or(0, |p| p.0 as usize + 1);
    let mut v = vec![0; len];
    for &(i, e) in part {
        v[i as usize] = e;
    }
    v
}

impl Tree {
    /// Fewest leaves of a tree with the given nonzero leaf exponents.
    pub(crate) fn min_leaves(part: &[(u32, u32)]) -> usize {
        let v = dense(part);
        let mut open = 0usize;
        for &a in &v {
            open = open.saturating_sub(1) + a as usize;
        }
        v.len() + open + 1
    }

    /// The tree with `leaves` leaves whose `leaf_exponents` are `part`,
    /// zero elsewhere. `leaves` must be at least `min_leaves(part)`.
    pub(crate) fn from_leaf_exponents(part: &[(u32, u32)], leaves: usize) -> Tree {
        let mut v = dense(part);
        debug_assert!(leaves >= Self::min_leaves(part));
        v.resize(leaves, 0);
        // A subtree hung at depth t whose first leaf has exponent a is a
        // left path of length a followed by a right subtrees at depths
        // t + a, …, t + 1.
        let mut pending: Vec<u32> = Vec::new();
        let mut spine = 0;
        let mut depths = Vec::with_capacity(leaves);
        for (k, &a) in v.iter().enumerate() {
            let t = match pending.pop() {
                Some(t) => t,
                None if k + 1 == leaves => {
                    depths.push(spine);
                    break;
                }
                None => {
                    spine += 1;
                    spine
                }
            };
            depths.push(t + a);
            pending.extend(t + 1..=t + a);
        }
        Tree::from_depths_unchecked(depths)
    }
}

/// Parses the sequence; `None` if it is not a tree.
fn start_exponents(depths: &[u32]) -> Option<Vec<u32>> {
    let mut stack: Vec<u32> = vec![0];
    let mut out = Vec::with_capacity(depths.len());
    for &d in depths {
        let mut t = stack.pop()?;
        let e = t;
        if t > d {
            return None;
        }
        while t < d {
            stack.push(t + 1);
            t += 1;
        }
        out.push(e);
    }
    if stack.is_empty() {
        Some(out)
    } else {
        None
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Rebuild the bracket form from depths.
        let mut out = String::new();
        let mut stack: Vec<u32> = vec![0];
        let mut open_right: Vec<bool> = Vec::new();
        for &d in &self.depths {
            let mut t = stack.pop().unwrap();
            while t < d {
                out.push('(');
                open_right.push(false);
                stack.push(t + 1);
                t += 1;
            }
            out.push('•');
            loop {
                match open_right.last_mut() {
                    Some(r) if *r => {
                        out.push(')');
                        open_right.pop();
                    }
                    Some(r) => {
                        *r = true;
                        out.push(',');
                        break;
                    }
                    None => break,
                }
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({self})")
    }
}

impl FromStr for Tree {
    type Err = Error;

    /// Bracket notation: `(•,(•,•))`; a leaf may also be written `.` or `*`.
    fn from_str(s: &str) -> Result<Self> {
        let mut depths = Vec::new();
        let mut depth = 0u32;
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| Error::Parse(format!("unbalanced tree {s}")))?
                }
                ',' => {}
                '•' | '.' | '*' => depths.push(depth),
                _ => return Err(Error::Parse(format!("unexpected {c:?} in tree {s}"))),
            }
        }
        let t = Tree::from_depths(depths).map_err(|_| Error::Parse(format!("not a binary tree: {s}")))?;
        if t.to_string() != s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '.' || c == '*' { '•' } else { c }).collect::<String>() {
            return Err(Error::Parse(format!("not a binary tree: {s}")));
        }
        Ok(t)
    }
}
