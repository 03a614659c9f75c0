//! Exact dyadic rationals `m / 2^e`.
//!
//! Every coordinate in the crate (breakpoints, images, tree leaves) is a
//! [`Dyadic`]. Values are kept canonical: either the exponent is zero or the
//! numerator is odd, so structural equality is numeric equality. Numerators
//! that fit in an `i128` are stored inline; larger ones spill to a `BigInt`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::varint;

/// Numerator storage. `Big` only holds values outside the `i128` range.
#[derive(Clone)]
enum Num {
    Small(i128),
    Big(BigInt),
}

impl Num {
    fn from_big(n: BigInt) -> Num {
        match n.to_i128() {
            Some(v) => Num::Small(v),
            None => Num::Big(n),
        }
    }

    fn from_i128(n: i128) -> Num {
        Num::Small(n)
    }

    fn bit_len(&self) -> u64 {
        match self {
            Num::Small(v) => 128 - v.unsigned_abs().leading_zeros() as u64,
            Num::Big(b) => b.bits(),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Num::Small(v) => BigInt::from(*v),
            Num::Big(b) => b.clone(),
        }
    }
}

#[derive(Clone)]
pub struct Dyadic {
    num: Num,
    exp: u32,
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.exp == other.exp
            && match (&self.num, &other.num) {
                (Num::Small(a), Num::Small(b)) => a == b,
                (Num::Big(a), Num::Big(b)) => a == b,
                _ => false,
            }
    }
}

impl Eq for Dyadic {}

impl Hash for Dyadic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.exp.hash(state);
        match &self.num {
            Num::Small(v) => v.hash(state),
            Num::Big(b) => b.hash(state),
        }
    }
}

fn checked_exp(e: u64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::Resource(format!("dyadic exponent {e} exceeds 2^32")))
}

fn small_canonical(n: i128, e: u64) -> Result<Dyadic> {
    if n == 0 {
        return Ok(Dyadic::zero());
    }
    let tz = (n.trailing_zeros() as u64).min(e);
    Ok(Dyadic { num: Num::from_i128(n >> tz), exp: checked_exp(e - tz)? })
}

impl Dyadic {
    /// Builds `n / 2^e` in canonical form.
    pub fn new(n: impl Into<BigInt>, e: u32) -> Self {
        Self::canonicalize(n.into(), e as u64).expect("u32 exponent always fits")
    }

    /// Canonical form of `n / 2^e`. Exponents beyond `u32::MAX` after
    /// cancellation are a resource error.
    pub fn canonicalize(n: BigInt, e: u64) -> Result<Self> {
        if n.is_zero() {
            return Ok(Self::zero());
        }
        let tz = n.trailing_zeros().unwrap_or(0).min(e);
        let exp = checked_exp(e - tz)?;
        Ok(Dyadic { num: Num::from_big(n >> tz), exp })
    }

    pub fn zero() -> Self {
        Dyadic { num: Num::Small(0), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: Num::Small(1), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: Num::Small(n as i128), exp: 0 }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            if k < 126 {
                Dyadic { num: Num::Small(1 << k), exp: 0 }
            } else {
                Dyadic { num: Num::from_big(BigInt::one() << (k as u64)), exp: 0 }
            }
        } else {
            Dyadic { num: Num::Small(1), exp: checked_exp(k.unsigned_abs()).expect("dyadic exponent exceeds 2^32") }
        }
    }

    pub fn numerator(&self) -> BigInt {
        self.num.to_big()
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.num, Num::Small(0))
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn signum(&self) -> i32 {
        match &self.num {
            Num::Small(v) => v.signum() as i32,
            Num::Big(b) => match b.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    /// Multiplies by `2^k`. This is the only division the type exposes.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        if k > 0 {
            let k = k as u64;
            if k <= self.exp as u64 {
                return Dyadic { num: self.num.clone(), exp: self.exp - k as u32 };
            }
            let shift = k - self.exp as u64;
            if let Num::Small(v) = self.num {
                if self.num.bit_len() + shift <= 126 {
                    return Dyadic { num: Num::Small(v << shift), exp: 0 };
                }
            }
            Dyadic { num: Num::from_big(self.num.to_big() << shift), exp: 0 }
        } else if self.exp == 0 {
            match self.num {
                Num::Small(v) => small_canonical(v, k.unsigned_abs()),
                Num::Big(ref b) => Self::canonicalize(b.clone(), k.unsigned_abs()),
            }
            .expect("dyadic exponent exceeds 2^32")
        } else {
            let e = checked_exp(self.exp as u64 + k.unsigned_abs()).expect("dyadic exponent exceeds 2^32");
            Dyadic { num: self.num.clone(), exp: e }
        }
    }

    pub fn halve(&self) -> Self {
        self.mul_pow2(-1)
    }

    pub fn floor(&self) -> BigInt {
        match &self.num {
            Num::Small(_) => BigInt::from(self.floor_small()),
            // Arithmetic shift rounds toward negative infinity.
            Num::Big(b) => b >> self.exp,
        }
    }

    fn floor_small(&self) -> i128 {
        match self.num {
            Num::Small(v) => v >> self.exp.min(127),
            Num::Big(_) => unreachable!(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        let f = self.floor();
        if self.exp == 0 {
            f
        } else {
            f + 1
        }
    }

    /// Floor as an `i64`, for window arithmetic.
    pub fn floor_i64(&self) -> i64 {
        match self.num {
            Num::Small(_) => i64::try_from(self.floor_small()).expect("integer part exceeds i64"),
            Num::Big(_) => self.floor().to_i64().expect("integer part exceeds i64"),
        }
    }

    pub fn ceil_i64(&self) -> i64 {
        let f = self.floor_i64();
        if self.exp == 0 {
            f
        } else {
            f + 1
        }
    }

    /// 2-adic valuation: the largest `v` with `self` a multiple of `2^v`.
    /// `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else if self.exp > 0 {
            Some(-(self.exp as i64))
        } else {
            Some(match &self.num {
                Num::Small(v) => v.trailing_zeros() as i64,
                Num::Big(b) => b.trailing_zeros().unwrap_or(0) as i64,
            })
        }
    }

    /// `floor(log2(self))` for a positive value.
    pub fn floor_log2(&self) -> i64 {
        assert!(self.signum() > 0, "floor_log2 of non-positive dyadic");
        let bits = match &self.num {
            Num::Small(v) => 128 - v.leading_zeros() as i64,
            Num::Big(b) => b.bits() as i64,
        };
        bits - 1 - self.exp as i64
    }

    /// Returns `k` when `self = 2^k * other`, both nonzero.
    pub fn pow2_ratio(&self, other: &Dyadic) -> Option<i64> {
        if self.is_zero() || other.is_zero() || self.signum() != other.signum() {
            return None;
        }
        let (a, b) = match (&self.num, &other.num) {
            (Num::Small(x), Num::Small(y)) => {
                let (a, b) = (x.trailing_zeros(), y.trailing_zeros());
                if (x >> a) != (y >> b) {
                    return None;
                }
                (a as u64, b as u64)
            }
            _ => {
                let (x, y) = (self.num.to_big(), other.num.to_big());
                let a = x.trailing_zeros().unwrap_or(0);
                let b = y.trailing_zeros().unwrap_or(0);
                if (x >> a) != (y >> b) {
                    return None;
                }
                (a, b)
            }
        };
        Some(a as i64 - b as i64 - self.exp as i64 + other.exp as i64)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Display only; never used in computation.
        self.num.to_big().to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.exp as i32)
    }

    /// Zigzag varint numerator followed by varint exponent.
    pub fn encode(&self, out: &mut Vec<u8>) {
        varint::put_bigint(out, &self.num.to_big());
        varint::put_u64(out, self.exp as u64);
    }

    pub fn decode(input: &mut &[u8]) -> Result<Self> {
        let num = varint::get_bigint(input)?;
        let exp = varint::get_u64(input)?;
        let d = Self::canonicalize(num.clone(), exp)?;
        if d.num.to_big() != num || d.exp as u64 != exp {
            return Err(Error::Malformed("non-canonical dyadic".into()));
        }
        Ok(d)
    }
}

/// Both numerators over the larger exponent, as `BigInt`s.
fn align_big(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u32) {
    let (x, y) = (a.num.to_big(), b.num.to_big());
    match a.exp.cmp(&b.exp) {
        Ordering::Equal => (x, y, a.exp),
        Ordering::Less => (x << (b.exp - a.exp), y, b.exp),
        Ordering::Greater => (x, y << (a.exp - b.exp), a.exp),
    }
}

/// 64-bit digit `i` of `|n|`, zero outside the stored range.
fn mag_digit(n: &Num, i: i64) -> u64 {
    if i < 0 {
        return 0;
    }
    match n {
        Num::Small(v) => match i {
            0 => v.unsigned_abs() as u64,
            1 => (v.unsigned_abs() >> 64) as u64,
            _ => 0,
        },
        Num::Big(b) => b.magnitude().iter_u64_digits().nth(i as usize).unwrap_or(0),
    }
}

/// Bits `k..k + 64` of `|n|`.
fn mag_bits(n: &Num, k: i64) -> u64 {
    let (w, o) = (k.div_euclid(64), k.rem_euclid(64) as u32);
    let lo = mag_digit(n, w);
    if o == 0 {
        lo
    } else {
        (lo >> o) | (mag_digit(n, w + 1) << (64 - o))
    }
}

/// Compares `|x| / 2^ex` with `|y| / 2^ey` by walking 64-bit windows from
/// the top, without materializing the aligned numerators.
fn cmp_aligned_magnitudes(x: &Num, ex: u32, y: &Num, ey: u32) -> Ordering {
    let e = ex.max(ey) as i64;
    let (sx, sy) = (e - ex as i64, e - ey as i64);
    let top = (x.bit_len() as i64 + sx).max(y.bit_len() as i64 + sy);
    let mut pos = top - 64;
    while pos > -64 {
        let (a, b) = (mag_bits(x, pos - sx), mag_bits(y, pos - sy));
        if a != b {
            return a.cmp(&b);
        }
        pos -= 64;
    }
    Ordering::Equal
}

/// Both numerators over the larger exponent as `i128`, when that is exact.
fn align_small(a: &Dyadic, b: &Dyadic) -> Option<(i128, i128, u32)> {
    let (Num::Small(x), Num::Small(y)) = (&a.num, &b.num) else {
        return None;
    };
    // Keep aligned values below 2^125 so that a sum cannot overflow.
    let (bx, by) = (a.num.bit_len(), b.num.bit_len());
    if bx > 125 || by > 125 {
        return None;
    }
    let (x, y) = (*x, *y);
    match a.exp.cmp(&b.exp) {
        Ordering::Equal => Some((x, y, a.exp)),
        Ordering::Less if bx + (b.exp - a.exp) as u64 <= 125 => Some((x << (b.exp - a.exp), y, b.exp)),
        Ordering::Greater if by + (a.exp - b.exp) as u64 <= 125 => Some((x, y << (a.exp - b.exp), a.exp)),
        _ => None,
    }
}

fn add_signed(a: &Dyadic, b: &Dyadic, negate: bool) -> Dyadic {
    if let Some((x, y, e)) = align_small(a, b) {
        let s = if negate { x - y } else { x + y };
        return small_canonical(s, e as u64).unwrap();
    }
    let (x, y, e) = align_big(a, b);
    let s = if negate { x - y } else { x + y };
    Dyadic::canonicalize(s, e as u64).unwrap()
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        add_signed(self, rhs, false)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        add_signed(self, rhs, true)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        let e = self.exp as u64 + rhs.exp as u64;
        if let (Num::Small(x), Num::Small(y)) = (&self.num, &rhs.num) {
            if let Some(p) = x.checked_mul(*y) {
                return small_canonical(p, e).expect("dyadic exponent exceeds 2^32");
            }
        }
        Dyadic::canonicalize(self.num.to_big() * rhs.num.to_big(), e).expect("dyadic exponent exceeds 2^32")
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        let num = match &self.num {
            Num::Small(v) => match v.checked_neg() {
                Some(n) => Num::Small(n),
                None => Num::from_big(-BigInt::from(*v)),
            },
            Num::Big(b) => Num::from_big(-b),
        };
        Dyadic { num, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (s, t) = (self.signum(), other.signum());
        if s != t {
            return s.cmp(&t);
        }
        if s == 0 {
            return Ordering::Equal;
        }
        // 2^(m-1) <= |v| < 2^m with m = bit length - exponent.
        let (ma, mb) = (self.num.bit_len() as i64 - self.exp as i64, other.num.bit_len() as i64 - other.exp as i64);
        if ma != mb {
            let by_magnitude = ma.cmp(&mb);
            return if s > 0 { by_magnitude } else { by_magnitude.reverse() };
        }
        if let Some((x, y, _)) = align_small(self, other) {
            return x.cmp(&y);
        }
        let by_magnitude = cmp_aligned_magnitudes(&self.num, self.exp, &other.num, other.exp);
        if s > 0 {
            by_magnitude
        } else {
            by_magnitude.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<i32> for Dyadic {
    fn from(n: i32) -> Self {
        Dyadic::from_int(n as i64)
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Self {
        Dyadic { num: Num::from_big(n), exp: 0 }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.to_big();
        if self.exp == 0 {
            write!(f, "{n}")
        } else if self.exp < 64 {
            write!(f, "{n}/{}", 1u64 << self.exp)
        } else {
            write!(f, "{n}/2^{}", self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `n`, `n/d` with `d` a power of two, and `n/2^e`.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let Some((n, d)) = s.split_once('/') else {
            return BigInt::from_str(s).map(Dyadic::from).map_err(|_| bad());
        };
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = d.trim();
        let exp = if let Some(e) = d.strip_prefix("2^") {
            e.parse::<u64>().map_err(|_| bad())?
        } else {
            let den = BigInt::from_str(d).map_err(|_| bad())?;
            if den.sign() != Sign::Plus {
                return Err(bad());
            }
            let tz = den.trailing_zeros().unwrap_or(0);
            if !(&den >> tz).is_one() {
                return Err(bad());
            }
            tz
        };
        Dyadic::canonicalize(num, exp)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
