//! The observer's view of an exchange: every frame on the wire, in order.
//! Entries carry the frame type, size and payload hash; the payload itself
//! is public but bulky, and private words never appear on the wire.

use std::time::Instant;

use plgroup::aag::Role;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::frame::{Frame, FrameType};

#[derive(Clone, Debug, Serialize)]
pub struct TranscriptEntry {
    pub seq: usize,
    pub elapsed_us: u64,
    pub from: &'static str,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub len: usize,
    pub sha256: String,
}

/// Append-only.
#[derive(Debug)]
pub struct Transcript {
    start: Instant,
    entries: Vec<TranscriptEntry>,
}

impl Default for Transcript {
    fn default() -> Self {
        Self::new()
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn role_name(r: Role) -> &'static str {
    match r {
        Role::A => "A",
        Role::B => "B",
    }
}

impl Transcript {
    pub fn new() -> Self {
        Transcript { start: Instant::now(), entries: Vec::new() }
    }

    pub fn record(&mut self, from: Role, frame: &Frame) {
        self.entries.push(TranscriptEntry {
            seq: self.entries.len(),
            elapsed_us: self.start.elapsed().as_micros() as u64,
            from: role_name(from),
            kind: frame.kind.name(),
            len: frame.payload.len(),
            sha256: hex(&Sha256::digest(&frame.payload)),
        });
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn count(&self, kind: FrameType) -> usize {
        self.entries.iter().filter(|e| e.kind == kind.name()).count()
    }

    /// One JSON object per line, timestamps included.
    pub fn to_json_lines(&self) -> String {
        self.entries
            .iter()
            .map(|e| serde_json::to_string(e).expect("entry serializes") + "\n")
            .collect()
    }

    /// The timing-free part, stable across runs.
    pub fn summary(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| format!("{:>2} {} {:<8} {:>7} bytes  sha256 {}", e.seq, e.from, e.kind, e.len, &e.sha256[..16]))
            .collect()
    }
}
