//! Commutator key exchange over the extension group. Both parties hold
//! public tuples, send conjugates of the other party's tuple by their
//! private element, and end with the commutator `[a, b] = a⁻¹b⁻¹ab`.
//!
//! Instance generation is plumbing: tuple elements are canonical forms of
//! seeded random words.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::extension::{ExtensionGroup, GElement, GLetter, GWord};
use crate::rng::SplitMix64;
use crate::varint;

pub const KDF_PREFIX: &[u8] = b"plgroup-kex/v1";

/// Default private word length range, inclusive.
pub const PRIVATE_LEN: (usize, usize) = (16, 32);

const INSTANCE_PREFIX: &[u8] = b"plgroup-instance/v1";

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Role {
    A,
    B,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::A => Role::B,
            Role::B => Role::A,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct InstanceParams {
    pub s_size: usize,
    pub t_size: usize,
    /// Inclusive length range of the random words behind tuple elements.
    pub word_len: (usize, usize),
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams { s_size: 3, t_size: 3, word_len: (1, 3) }
    }
}

/// Public tuples: `s` for A's private word, `t` for B's.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PublicInstance {
    pub s_tuple: Vec<GElement>,
    pub t_tuple: Vec<GElement>,
    digest: [u8; 32],
}

impl PublicInstance {
    pub fn new(group: &ExtensionGroup, s_tuple: Vec<GElement>, t_tuple: Vec<GElement>) -> Result<Self> {
        if s_tuple.is_empty() || t_tuple.is_empty() {
            return Err(Error::Malformed("instance tuples must be non-empty".into()));
        }
        if s_tuple.iter().chain(&t_tuple).any(GElement::is_identity) {
            return Err(Error::Malformed("instance tuple contains the identity".into()));
        }
        let mut h = Sha256::new();
        h.update(INSTANCE_PREFIX);
        h.update(group.digest());
        h.update(encode_tuples(&s_tuple, &t_tuple));
        Ok(PublicInstance { s_tuple, t_tuple, digest: h.finalize().into() })
    }

    pub fn digest(&self) -> [u8; 32] {
        self.digest
    }

    pub fn tuple(&self, role: Role) -> &[GElement] {
        match role {
            Role::A => &self.s_tuple,
            Role::B => &self.t_tuple,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        encode_tuples(&self.s_tuple, &self.t_tuple)
    }

    pub fn from_bytes(group: &ExtensionGroup, bytes: &[u8]) -> Result<Self> {
        let mut rest = bytes;
        let n = group.stable_count();
        let s = decode_list(&mut rest, n)?;
        let t = decode_list(&mut rest, n)?;
        if !rest.is_empty() {
            return Err(Error::Malformed("trailing bytes after instance".into()));
        }
        Self::new(group, s, t)
    }
}

fn encode_tuples(s: &[GElement], t: &[GElement]) -> Vec<u8> {
    let mut out = Vec::new();
    encode_list(&mut out, s);
    encode_list(&mut out, t);
    out
}

fn encode_list(out: &mut Vec<u8>, v: &[GElement]) {
    varint::put_u64(out, v.len() as u64);
    for g in v {
        g.encode(out);
    }
}

fn decode_list(input: &mut &[u8], n: u32) -> Result<Vec<GElement>> {
    let count = varint::get_usize(input)?;
    if count > input.len() {
        return Err(Error::Malformed(format!("list claims {count} elements")));
    }
    (0..count).map(|_| GElement::decode(input, n)).collect()
}

/// A uniformly drawn freely reduced word of exactly `len` letters.
pub fn random_gword(group: &ExtensionGroup, rng: &mut SplitMix64, len: usize) -> GWord {
    let letters = group.generator_letters();
    let mut w: GWord = Vec::with_capacity(len);
    while w.len() < len {
        let l: GLetter = letters[rng.below(letters.len() as u64) as usize];
        if w.last() != Some(&l.inverse()) {
            w.push(l);
        }
    }
    w
}

/// Deterministic instance for a seed; trivial draws are redrawn.
pub fn instance_gen(group: &ExtensionGroup, params: &InstanceParams, seed: u64) -> Result<PublicInstance> {
    if params.s_size == 0 || params.t_size == 0 || params.word_len.0 == 0 || params.word_len.0 > params.word_len.1
    {
        return Err(Error::Malformed(format!("invalid instance parameters {params:?}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut draw = |count: usize| -> Result<Vec<GElement>> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let len = rng.range(params.word_len.0 as u64, params.word_len.1 as u64) as usize;
            let g = group.word_to_canonical(&random_gword(group, &mut rng, len))?;
            if !g.is_identity() {
                out.push(g);
            }
        }
        Ok(out)
    };
    let s = draw(params.s_size)?;
    let t = draw(params.t_size)?;
    PublicInstance::new(group, s, t)
}

/// A private element as a word in the role's own tuple: `+i` for the
/// `i`-th element (1-based), `-i` for its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrivateWord {
    pub role: Role,
    pub letters: Vec<i32>,
}

impl PrivateWord {
    pub fn random(role: Role, tuple_len: usize, len: (usize, usize), rng: &mut SplitMix64) -> Self {
        assert!(tuple_len > 0 && len.0 > 0 && len.0 <= len.1);
        let n = rng.range(len.0 as u64, len.1 as u64) as usize;
        let mut letters: Vec<i32> = Vec::with_capacity(n);
        while letters.len() < n {
            let i = rng.below(tuple_len as u64) as i32 + 1;
            let s = if rng.coin() { -i } else { i };
            if letters.last() != Some(&-s) {
                letters.push(s);
            }
        }
        PrivateWord { role, letters }
    }

    /// The element spelled by the word, multiplied out in `tuple`.
    pub fn evaluate(&self, group: &ExtensionGroup, tuple: &[GElement]) -> Result<GElement> {
        group.evaluate(tuple, &self.letters)
    }

    /// The literal word over the generators, expanding each tuple letter.
    pub fn expand(&self, tuple: &[GElement]) -> GWord {
        let mut out = GWord::new();
        for &s in &self.letters {
            let w = tuple[s.unsigned_abs() as usize - 1].to_gword();
            if s > 0 {
                out.extend(w);
            } else {
                out.extend(w.iter().rev().map(|l| l.inverse()));
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Commitment {
    pub role: Role,
    pub entries: Vec<GElement>,
}

impl Commitment {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        encode_list(&mut out, &self.entries);
        out
    }

    pub fn from_bytes(role: Role, bytes: &[u8], n: u32) -> Result<Self> {
        let mut rest = bytes;
        let entries = decode_list(&mut rest, n)?;
        if !rest.is_empty() {
            return Err(Error::Malformed("trailing bytes after commitment".into()));
        }
        Ok(Commitment { role, entries })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SharedKey {
    pub element: GElement,
    pub digest: [u8; 32],
}

impl SharedKey {
    pub fn new(element: GElement) -> Self {
        let digest = kdf(&element);
        SharedKey { element, digest }
    }
}

/// SHA-256 over the prefix, the 32-bit big-endian length of the canonical
/// encoding, and the encoding itself.
pub fn kdf(element: &GElement) -> [u8; 32] {
    kdf_bytes(&element.to_bytes())
}

pub fn kdf_bytes(encoding: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(KDF_PREFIX);
    h.update((encoding.len() as u32).to_be_bytes());
    h.update(encoding);
    h.finalize().into()
}

/// Draws a private word of the given length range over the role's own
/// tuple and conjugates the opposite tuple by it.
pub fn commit(
    group: &ExtensionGroup,
    instance: &PublicInstance,
    role: Role,
    seed: u64,
    len: (usize, usize),
) -> Result<(PrivateWord, Commitment)> {
    let mut rng = SplitMix64::new(seed);
    let own = instance.tuple(role);
    let private = PrivateWord::random(role, own.len(), len, &mut rng);
    let commitment = commit_with(group, instance, &private)?;
    Ok((private, commitment))
}

/// `[x⁻¹ y x for y in opposite tuple]`, `x` the private element.
pub fn commit_with(group: &ExtensionGroup, instance: &PublicInstance, private: &PrivateWord) -> Result<Commitment> {
    let x = private.evaluate(group, instance.tuple(private.role))?;
    let xi = group.invert(&x)?;
    let entries = instance
        .tuple(private.role.other())
        .iter()
        .map(|t| group.multiply(&group.multiply(&xi, t)?, &x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Commitment { role: private.role, entries })
}

/// Evaluates the private word on the received conjugates and forms
/// `[a, b]`: A computes `a⁻¹ · b⁻¹ab`, B computes `(b⁻¹ · a⁻¹ba)⁻¹`.
pub fn derive_key(
    group: &ExtensionGroup,
    private: &PrivateWord,
    own_tuple: &[GElement],
    received: &Commitment,
) -> Result<SharedKey> {
    if received.entries.len() != own_tuple.len() {
        return Err(Error::LengthMismatch { expected: own_tuple.len(), got: received.entries.len() });
    }
    let conj = group.evaluate(&received.entries, &private.letters)?;
    let xi = group.invert(&private.evaluate(group, own_tuple)?)?;
    let k = group.multiply(&xi, &conj)?;
    let key = match private.role {
        Role::A => k,
        Role::B => group.invert(&k)?,
    };
    Ok(SharedKey::new(key))
}

/// `[a, b]` from the literal word `a⁻¹b⁻¹ab` over the generators.
pub fn commutator_by_expansion(
    group: &ExtensionGroup,
    instance: &PublicInstance,
    a: &PrivateWord,
    b: &PrivateWord,
) -> Result<GElement> {
    let wa = a.expand(instance.tuple(Role::A));
    let wb = b.expand(instance.tuple(Role::B));
    let inv = |w: &GWord| -> GWord { w.iter().rev().map(|l| l.inverse()).collect() };
    let mut word = inv(&wa);
    word.extend(inv(&wb));
    word.extend(wa);
    word.extend(wb);
    group.word_to_canonical(&word)
}
