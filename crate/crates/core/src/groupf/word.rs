use std::fmt;

use super::pair::TreePair;
use crate::error::{Error, Result};
use crate::syntax;

/// A letter over `x0, x1` and their inverses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FLetter {
    /// 0 or 1.
    pub gen: u8,
    pub inv: bool,
}

pub type FWord = Vec<FLetter>;

impl FLetter {
    pub fn x0(positive: bool) -> Self {
        FLetter { gen: 0, inv: !positive }
    }

    pub fn x1(positive: bool) -> Self {
        FLetter { gen: 1, inv: !positive }
    }

    pub fn inverse(self) -> Self {
        FLetter { gen: self.gen, inv: !self.inv }
    }

    pub fn all() -> [FLetter; 4] {
        [FLetter::x0(true), FLetter::x1(true), FLetter::x0(false), FLetter::x1(false)]
    }

    pub fn to_treepair(self) -> TreePair {
        let g = TreePair::x(self.gen as u32);
        if self.inv {
            g.invert()
        } else {
            g
        }
    }
}

impl fmt::Display for FLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.inv { 'X' } else { 'x' }, self.gen)
    }
}

/// `x_n` as a word in `x0, x1`: `x0^-(n-1) x1 x0^(n-1)` for `n >= 2`.
pub fn expand_generator(n: u32) -> FWord {
    match n {
        0 => vec![FLetter::x0(true)],
        _ => {
            let k = (n - 1) as usize;
            let mut w = vec![FLetter::x0(false); k];
            w.push(FLetter::x1(true));
            w.extend(vec![FLetter::x0(true); k]);
            w
        }
    }
}

pub fn invert_word(w: &[FLetter]) -> FWord {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn free_reduce(w: FWord) -> FWord {
    let mut out: FWord = Vec::with_capacity(w.len());
    for l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Parses `x0 X1 x1^-1 a b^3 …`. `a`/`α` stand for `x0`, `b`/`β` for `x1`,
/// `xN` for the expanded generator `x_N`; uppercase or a negative exponent
/// inverts.
pub fn parse_fword(s: &str) -> Result<FWord> {
    let mut w = Vec::new();
    for (name, e) in syntax::tokens(s)? {
        let (lower, upper) = syntax::case_split(&name);
        let base = match lower.as_str() {
            "a" | "α" => expand_generator(0),
            "b" | "β" => expand_generator(1),
            _ => match lower.strip_prefix('x').and_then(|n| n.parse::<u32>().ok()) {
                Some(n) if n <= 1 << 16 => expand_generator(n),
                _ => return Err(Error::Parse(format!("unknown letter {name:?} in an F word"))),
            },
        };
        let e = if upper { -e } else { e };
        let piece = if e < 0 { invert_word(&base) } else { base };
        for _ in 0..e.unsigned_abs() {
            w.extend_from_slice(&piece);
        }
    }
    Ok(w)
}

pub fn format_fword(w: &[FLetter]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// The reduced tree pair of a word; the leftmost letter is applied last.
pub fn word_to_element(w: &[FLetter]) -> TreePair {
    w.iter().fold(TreePair::identity(), |acc, l| acc.multiply(&l.to_treepair()))
}

pub fn is_identity_f(w: &[FLetter]) -> bool {
    word_to_element(w).is_identity()
}
