//! Length-prefixed frames: a 32-bit big-endian length covering the type
//! byte and the payload, then the type byte, then the payload.

use std::io::{Read, Write};

use crate::error::{HarnessError, Result};

/// Largest accepted value of the length field.
pub const MAX_FRAME: u32 = 16 * 1024 * 1024;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FrameType {
    Hello = 0x01,
    Instance = 0x02,
    CommitA = 0x03,
    CommitB = 0x04,
    KeyConf = 0x05,
    Error = 0x7F,
}

impl FrameType {
    pub fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            0x01 => FrameType::Hello,
            0x02 => FrameType::Instance,
            0x03 => FrameType::CommitA,
            0x04 => FrameType::CommitB,
            0x05 => FrameType::KeyConf,
            0x7F => FrameType::Error,
            _ => return Err(HarnessError::UnknownFrameType(b)),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameType::Hello => "HELLO",
            FrameType::Instance => "INSTANCE",
            FrameType::CommitA => "COMMIT_A",
            FrameType::CommitB => "COMMIT_B",
            FrameType::KeyConf => "KEYCONF",
            FrameType::Error => "ERROR",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Frame {
    pub kind: FrameType,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(kind: FrameType, payload: Vec<u8>) -> Self {
        Frame { kind, payload }
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        let len = self.payload.len() + 1;
        if len > MAX_FRAME as usize {
            return Err(HarnessError::FrameTooLarge(len as u64));
        }
        let mut out = Vec::with_capacity(4 + len);
        out.extend_from_slice(&(len as u32).to_be_bytes());
        out.push(self.kind as u8);
        out.extend_from_slice(&self.payload);
        Ok(out)
    }

    /// Decodes one frame that must fill `bytes` exactly.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = bytes;
        let f = Self::read_from(&mut r)?;
        if !r.is_empty() {
            return Err(HarnessError::Protocol(format!("{} bytes after frame", r.len())));
        }
        Ok(f)
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(&self.encode()?)?;
        w.flush()?;
        Ok(())
    }

    /// Reads one frame. The length is checked before the payload buffer is
    /// allocated.
    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut head = [0u8; 4];
        r.read_exact(&mut head)?;
        let len = u32::from_be_bytes(head);
        if len == 0 {
            return Err(HarnessError::Protocol("frame without a type byte".into()));
        }
        if len > MAX_FRAME {
            return Err(HarnessError::FrameTooLarge(len as u64));
        }
        let mut kind = [0u8; 1];
        r.read_exact(&mut kind)?;
        let kind = FrameType::from_byte(kind[0])?;
        let mut payload = vec![0u8; len as usize - 1];
        r.read_exact(&mut payload)?;
        Ok(Frame { kind, payload })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout() {
        let f = Frame::new(FrameType::KeyConf, vec![9, 8]);
        assert_eq!(f.encode().unwrap(), vec![0, 0, 0, 3, 0x05, 9, 8]);
        assert_eq!(Frame::decode(&[0, 0, 0, 1, 0x7F]).unwrap(), Frame::new(FrameType::Error, vec![]));
    }

    #[test]
    fn rejects_bad_headers() {
        assert!(matches!(Frame::decode(&[0, 0, 0, 0]), Err(HarnessError::Protocol(_))));
        assert!(matches!(Frame::decode(&[0, 0, 0, 1, 0x06]), Err(HarnessError::UnknownFrameType(6))));
        // Oversize length is refused from the header alone.
        assert!(matches!(Frame::decode(&[0x01, 0, 0, 1, 0x01]), Err(HarnessError::FrameTooLarge(_))));
        assert!(matches!(Frame::decode(&[0, 0, 0, 5, 0x01, 1]), Err(HarnessError::Io(_))));
    }

    proptest! {
        #[test]
        fn round_trip(kind in prop::sample::select(vec![
            FrameType::Hello, FrameType::Instance, FrameType::CommitA,
            FrameType::CommitB, FrameType::KeyConf, FrameType::Error,
        ]), payload in prop::collection::vec(any::<u8>(), 0..2048)) {
            let f = Frame::new(kind, payload);
            prop_assert_eq!(Frame::decode(&f.encode().unwrap()).unwrap(), f);
        }
    }
}
