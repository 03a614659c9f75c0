use std::fmt;

use super::pair::TreePair;
use super::tree::Tree;
use super::word::FLetter;
use crate::error::{Error, Result};
use crate::varint;

/// Largest index or exponent accepted when decoding untrusted bytes.
pub const DECODE_LIMIT: u64 = 1 << 20;

/// `x_{i1}^{r1} … x_{ik}^{rk} · x_{jl}^{-sl} … x_{j1}^{-s1}` with
/// `i1 < … < ik`, `j1 < … < jl`, every exponent positive, and: if an index
/// appears in both parts then its successor appears in one of them.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalForm {
    pos: Vec<(u32, u32)>,
    neg: Vec<(u32, u32)>,
}

fn check_part(part: &[(u32, u32)]) -> Result<()> {
    for w in part.windows(2) {
        if w[0].0 >= w[1].0 {
            return Err(Error::Malformed("normal form indices must increase".into()));
        }
    }
    if part.iter().any(|p| p.1 == 0) {
        return Err(Error::Malformed("normal form exponents must be positive".into()));
    }
    Ok(())
}

impl NormalForm {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Validates the shape and the uniqueness condition.
    pub fn new(pos: Vec<(u32, u32)>, neg: Vec<(u32, u32)>) -> Result<Self> {
        check_part(&pos)?;
        check_part(&neg)?;
        let has = |part: &[(u32, u32)], i: u32| part.binary_search_by_key(&i, |p| p.0).is_ok();
        for &(i, _) in &pos {
            if has(&neg, i) && !has(&pos, i + 1) && !has(&neg, i + 1) {
                return Err(Error::Malformed(format!(
                    "x{i} occurs with both signs but x{} does not occur",
                    i + 1
                )));
            }
        }
        Ok(NormalForm { pos, neg })
    }

    pub fn positive(&self) -> &[(u32, u32)] {
        &self.pos
    }

    pub fn negative(&self) -> &[(u32, u32)] {
        &self.neg
    }

    pub fn is_identity(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn from_treepair(p: &TreePair) -> NormalForm {
        let part = |exps: Vec<u32>| -> Vec<(u32, u32)> {
            exps.into_iter()
                .enumerate()
                .filter(|e| e.1 > 0)
                .map(|(i, e)| (i as u32, e))
                .collect()
        };
        NormalForm { pos: part(p.range().leaf_exponents()), neg: part(p.domain().leaf_exponents()) }
    }

    /// Builds both trees directly from the exponents, in linear time.
    pub fn to_treepair(&self) -> TreePair {
        let n = Tree::min_leaves(&self.pos).max(Tree::min_leaves(&self.neg));
        let range = Tree::from_leaf_exponents(&self.pos, n);
        let domain = Tree::from_leaf_exponents(&self.neg, n);
        TreePair::new(domain, range).expect("trees of equal size")
    }

    /// The word in `x0, x1` obtained by expanding `x_i = x0^-(i-1) x1 x0^(i-1)`,
    /// freely reduced.
    pub fn to_word(&self) -> Vec<FLetter> {
        let mut w = Vec::new();
        let mut push = |i: u32, e: i64| {
            if i == 0 {
                w.extend(std::iter::repeat_n(FLetter::x0(e > 0), e.unsigned_abs() as usize));
            } else {
                let k = (i - 1) as usize;
                w.extend(std::iter::repeat_n(FLetter::x0(false), k));
                w.extend(std::iter::repeat_n(FLetter::x1(e > 0), e.unsigned_abs() as usize));
                w.extend(std::iter::repeat_n(FLetter::x0(true), k));
            }
        };
        for &(i, e) in &self.pos {
            push(i, e as i64);
        }
        for &(i, e) in self.neg.iter().rev() {
            push(i, -(e as i64));
        }
        super::word::free_reduce(w)
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        varint::put_u64(out, self.pos.len() as u64);
        for &(i, e) in &self.pos {
            varint::put_u64(out, i as u64);
            varint::put_i64(out, e as i64);
        }
        varint::put_u64(out, self.neg.len() as u64);
        for &(i, e) in &self.neg {
            varint::put_u64(out, i as u64);
            varint::put_i64(out, -(e as i64));
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.encode(&mut v);
        v
    }

    /// Reads a normal form, rejecting anything that is not canonical.
    pub fn decode(input: &mut &[u8]) -> Result<Self> {
        let mut part = |sign: i64| -> Result<Vec<(u32, u32)>> {
            let n = varint::get_u64(input)?;
            if n > input.len() as u64 {
                return Err(Error::Malformed(format!("normal form claims {n} factors")));
            }
            let mut v = Vec::with_capacity(n as usize);
            for _ in 0..n {
                let i = varint::get_u64(input)?;
                let e = varint::get_i64(input)? * sign;
                if i > DECODE_LIMIT || e.unsigned_abs() > DECODE_LIMIT {
                    return Err(Error::Resource(format!("normal form factor x{i}^{e} too large")));
                }
                if e <= 0 {
                    return Err(Error::Malformed("normal form exponent has the wrong sign".into()));
                }
                v.push((i as u32, e as u32));
            }
            Ok(v)
        };
        let pos = part(1)?;
        let neg = part(-1)?;
        Self::new(pos, neg)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rest = bytes;
        let nf = Self::decode(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Malformed("trailing bytes after normal form".into()));
        }
        Ok(nf)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, i: u32, e: i64| -> fmt::Result {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")
            } else {
                write!(f, "x{i}^{e}")
            }
        };
        for &(i, e) in &self.pos {
            put(f, i, e as i64)?;
        }
        for &(i, e) in self.neg.iter().rev() {
            put(f, i, -(e as i64))?;
        }
        Ok(())
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalForm({self})")
    }
}
