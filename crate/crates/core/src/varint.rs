//! LEB128 varints, zigzag for signed values.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn put_u64(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

pub fn put_i64(out: &mut Vec<u8>, v: i64) {
    put_u64(out, ((v << 1) ^ (v >> 63)) as u64);
}

pub fn get_u64(input: &mut &[u8]) -> Result<u64> {
    let mut v: u64 = 0;
    for shift in (0..64).step_by(7) {
        let (&byte, rest) = input
            .split_first()
            .ok_or_else(|| Error::Malformed("truncated varint".into()))?;
        *input = rest;
        let payload = (byte & 0x7f) as u64;
        if shift == 63 && payload > 1 {
            return Err(Error::Malformed("varint overflows u64".into()));
        }
        v |= payload << shift;
        if byte & 0x80 == 0 {
            if byte == 0 && shift > 0 {
                return Err(Error::Malformed("non-minimal varint".into()));
            }
            return Ok(v);
        }
    }
    Err(Error::Malformed("varint too long".into()))
}

pub fn get_i64(input: &mut &[u8]) -> Result<i64> {
    let z = get_u64(input)?;
    Ok(((z >> 1) as i64) ^ -((z & 1) as i64))
}

pub fn get_usize(input: &mut &[u8]) -> Result<usize> {
    let v = get_u64(input)?;
    usize::try_from(v).map_err(|_| Error::Malformed("length overflows usize".into()))
}

/// Zigzag-encoded arbitrary precision integer.
pub fn put_bigint(out: &mut Vec<u8>, v: &BigInt) {
    let z: BigUint = match v.sign() {
        Sign::Minus => ((-v).to_biguint().unwrap() << 1u32) - 1u32,
        _ => v.to_biguint().unwrap() << 1u32,
    };
    if let Some(small) = z.to_u64() {
        return put_u64(out, small);
    }
    let mut z = z;
    let mask = BigUint::from(0x7fu32);
    loop {
        let byte = (&z & &mask).to_u8().unwrap();
        z >>= 7u32;
        if z.is_zero() {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

pub fn get_bigint(input: &mut &[u8]) -> Result<BigInt> {
    let mut z = BigUint::zero();
    let mut shift = 0u64;
    loop {
        let (&byte, rest) = input
            .split_first()
            .ok_or_else(|| Error::Malformed("truncated varint".into()))?;
        *input = rest;
        z |= BigUint::from(byte & 0x7f) << shift;
        if byte & 0x80 == 0 {
            if byte == 0 && shift > 0 {
                return Err(Error::Malformed("non-minimal varint".into()));
            }
            break;
        }
        shift += 7;
    }
    let neg = z.bit(0);
    let mag = BigInt::from(z >> 1u32);
    Ok(if neg { -mag - 1 } else { mag })
}
