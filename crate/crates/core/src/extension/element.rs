use std::fmt;

use crate::error::{Error, Result};
use crate::groupf::{NormalForm, TreePair};
use crate::syntax;
use crate::varint;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GGen {
    /// The F generator `x0`.
    Alpha,
    /// The F generator `x1`.
    Beta,
    /// Stable letter `t_j`, 1-based.
    T(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GLetter {
    pub gen: GGen,
    pub inv: bool,
}

pub type GWord = Vec<GLetter>;

impl GLetter {
    pub fn alpha(positive: bool) -> Self {
        GLetter { gen: GGen::Alpha, inv: !positive }
    }

    pub fn beta(positive: bool) -> Self {
        GLetter { gen: GGen::Beta, inv: !positive }
    }

    pub fn t(j: u32, positive: bool) -> Self {
        GLetter { gen: GGen::T(j), inv: !positive }
    }

    pub fn inverse(self) -> Self {
        GLetter { gen: self.gen, inv: !self.inv }
    }

    /// Signed stable index (`±j`), or `None` for F letters.
    pub fn stable(self) -> Option<i32> {
        match self.gen {
            GGen::T(j) => Some(if self.inv { -(j as i32) } else { j as i32 }),
            _ => None,
        }
    }
}

impl fmt::Display for GLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.gen {
            GGen::Alpha => "a".to_string(),
            GGen::Beta => "b".to_string(),
            GGen::T(j) => format!("t{j}"),
        };
        if self.inv {
            write!(f, "{}", s.to_uppercase())
        } else {
            f.write_str(&s)
        }
    }
}

/// Parses `a B t1 T2^3 …`: `a`/`α`/`x0` and `b`/`β`/`x1` for the F
/// generators, `tJ` for stable letters; uppercase or negative exponents invert.
pub fn parse_gword(s: &str) -> Result<GWord> {
    let mut w = Vec::new();
    for (name, e) in syntax::tokens(s)? {
        let (lower, upper) = syntax::case_split(&name);
        let gen = match lower.as_str() {
            "a" | "α" | "x0" => GGen::Alpha,
            "b" | "β" | "x1" => GGen::Beta,
            _ => match lower.strip_prefix('t').and_then(|n| n.parse::<u32>().ok()) {
                Some(j) if j >= 1 => GGen::T(j),
                _ => return Err(Error::Parse(format!("unknown letter {name:?}"))),
            },
        };
        let e = if upper { -e } else { e };
        for _ in 0..e.unsigned_abs() {
            w.push(GLetter { gen, inv: e < 0 });
        }
    }
    Ok(w)
}

pub fn format_gword(w: &[GLetter]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn invert_gword(w: &[GLetter]) -> GWord {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn free_reduce_gword(w: GWord) -> GWord {
    let mut out: GWord = Vec::with_capacity(w.len());
    for l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Appends a stable letter to a freely reduced stable word.
pub fn push_stable(w: &mut Vec<i32>, s: i32) {
    if w.last() == Some(&-s) {
        w.pop();
    } else {
        w.push(s);
    }
}

/// An element `f · w` of the extension: `f` in F, `w` a freely reduced
/// word in the stable letters (`+j` for `t_j`, `-j` for its inverse).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GElement {
    pub(crate) f: TreePair,
    pub(crate) w: Vec<i32>,
}

impl GElement {
    pub fn identity() -> Self {
        GElement { f: TreePair::identity(), w: Vec::new() }
    }

    pub fn from_f(f: TreePair) -> Self {
        GElement { f, w: Vec::new() }
    }

    /// Freely reduces `w`; indices must be nonzero.
    pub fn new(f: TreePair, w: &[i32]) -> Self {
        let mut r = Vec::with_capacity(w.len());
        for &s in w {
            assert!(s != 0, "stable index 0");
            push_stable(&mut r, s);
        }
        GElement { f, w: r }
    }

    pub fn f_part(&self) -> &TreePair {
        &self.f
    }

    pub fn stable_word(&self) -> &[i32] {
        &self.w
    }

    pub fn is_identity(&self) -> bool {
        self.f.is_identity() && self.w.is_empty()
    }

    /// A word spelling this element: the normal form of `f` over `α, β`,
    /// followed by the stable letters.
    pub fn to_gword(&self) -> GWord {
        let mut out: GWord = NormalForm::from_treepair(&self.f)
            .to_word()
            .into_iter()
            .map(|l| if l.gen == 0 { GLetter::alpha(!l.inv) } else { GLetter::beta(!l.inv) })
            .collect();
        out.extend(self.w.iter().map(|&s| GLetter::t(s.unsigned_abs(), s > 0)));
        out
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        NormalForm::from_treepair(&self.f).encode(out);
        varint::put_u64(out, self.w.len() as u64);
        for &s in &self.w {
            varint::put_i64(out, s as i64);
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.encode(&mut v);
        v
    }

    /// Reads an element over `n` stable letters; rejects non-canonical data.
    pub fn decode(input: &mut &[u8], n: u32) -> Result<Self> {
        let nf = NormalForm::decode(input)?;
        let count = varint::get_u64(input)?;
        if count > input.len() as u64 {
            return Err(Error::Malformed(format!("stable word claims {count} letters")));
        }
        let mut w: Vec<i32> = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let s = varint::get_i64(input)?;
            if s == 0 || s.unsigned_abs() > n as u64 {
                return Err(Error::Malformed(format!("stable letter index {s} out of range 1..={n}")));
            }
            let s = s as i32;
            if w.last() == Some(&-s) {
                return Err(Error::Malformed("stable word is not freely reduced".into()));
            }
            w.push(s);
        }
        Ok(GElement { f: nf.to_treepair(), w })
    }

    pub fn from_bytes(bytes: &[u8], n: u32) -> Result<Self> {
        let mut rest = bytes;
        let g = Self::decode(&mut rest, n)?;
        if !rest.is_empty() {
            return Err(Error::Malformed("trailing bytes after element".into()));
        }
        Ok(g)
    }
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nf = NormalForm::from_treepair(&self.f);
        let ws: Vec<String> = self
            .w
            .iter()
            .map(|&s| if s > 0 { format!("t{s}") } else { format!("T{}", -s) })
            .collect();
        match (nf.is_identity(), ws.is_empty()) {
            (true, true) => f.write_str("1"),
            (false, true) => write!(f, "{nf}"),
            (true, false) => f.write_str(&ws.join(" ")),
            (false, false) => write!(f, "{nf} · {}", ws.join(" ")),
        }
    }
}

impl fmt::Debug for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GElement({self})")
    }
}
