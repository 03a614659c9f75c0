//! The two-party exchange as a pair of state machines over a transport.
//!
//! Frame order, A first:
//! HELLO (A), HELLO (B), INSTANCE (A), COMMIT_A (A), COMMIT_B (B),
//! KEYCONF (B), KEYCONF (A). Each side checks the peer's confirmation tag
//! before sending its own, so a mismatch stops the run at the first side
//! that can see it.

use std::sync::{Arc, Mutex};
use std::thread;

use plgroup::aag::{
    commit, derive_key, instance_gen, Commitment, InstanceParams, PrivateWord, PublicInstance, Role, SharedKey,
    PRIVATE_LEN,
};
use plgroup::extension::ExtensionGroup;
use plgroup::rng::SplitMix64;
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};
use crate::frame::{Frame, FrameType};
use crate::transcript::{hex, Transcript};
use crate::transport::{duplex, Tamper, Tap, Transport};

pub const PROTOCOL_VERSION: u8 = 1;
const KEYCONF_PREFIX: &[u8] = b"plgroup-keyconf/v1";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExchangeConfig {
    pub instance: InstanceParams,
    /// Inclusive length range of the private words.
    pub private_len: (usize, usize),
}

impl Default for ExchangeConfig {
    fn default() -> Self {
        ExchangeConfig { instance: InstanceParams::default(), private_len: PRIVATE_LEN }
    }
}

/// Per-run seeds, all drawn from one master seed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Seeds {
    pub instance: u64,
    pub a: u64,
    pub b: u64,
}

impl Seeds {
    pub fn from_master(seed: u64) -> Self {
        let mut rng = SplitMix64::new(seed);
        Seeds { instance: rng.next_u64(), a: rng.next_u64(), b: rng.next_u64() }
    }

    pub fn private(&self, role: Role) -> u64 {
        match role {
            Role::A => self.a,
            Role::B => self.b,
        }
    }
}

/// What one side holds after a completed run.
#[derive(Clone, Debug)]
pub struct Session {
    pub role: Role,
    pub instance: PublicInstance,
    pub private: PrivateWord,
    pub sent: Commitment,
    pub received: Commitment,
    pub key: SharedKey,
}

pub fn keyconf_tag(key: &SharedKey) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(KEYCONF_PREFIX);
    h.update(key.digest);
    h.finalize().into()
}

fn hello_payload(group: &ExtensionGroup) -> Vec<u8> {
    let mut p = vec![PROTOCOL_VERSION];
    p.extend_from_slice(&group.digest());
    p
}

/// Sends an ERROR frame, ignoring transport failures, and returns `err`.
fn abort<T: Transport, V>(t: &mut T, err: HarnessError) -> Result<V> {
    let _ = t.send(&Frame::new(FrameType::Error, err.to_string().into_bytes()));
    Err(err)
}

fn expect<T: Transport>(t: &mut T, kind: FrameType) -> Result<Frame> {
    let f = t.recv()?;
    if f.kind == FrameType::Error {
        return Err(HarnessError::PeerAbort(String::from_utf8_lossy(&f.payload).into_owned()));
    }
    if f.kind != kind {
        let err = HarnessError::Protocol(format!("expected {}, got {}", kind.name(), f.kind.name()));
        return abort(t, err);
    }
    Ok(f)
}

fn check_hello<T: Transport>(t: &mut T, group: &ExtensionGroup, f: &Frame) -> Result<()> {
    match f.payload.split_first() {
        Some((&v, _)) if v != PROTOCOL_VERSION => abort(t, HarnessError::VersionMismatch(v)),
        Some((_, digest)) if digest == group.digest() => Ok(()),
        Some(_) => abort(t, HarnessError::GroupMismatch),
        None => abort(t, HarnessError::Protocol("empty HELLO".into())),
    }
}

fn check_keyconf<T: Transport>(t: &mut T, key: &SharedKey, f: &Frame) -> Result<()> {
    if f.payload != keyconf_tag(key) {
        return abort(t, HarnessError::DigestMismatch);
    }
    Ok(())
}

/// Runs one side of the exchange. Role A draws the instance from
/// `seeds.instance`; each role draws its private word from its own seed.
pub fn run_exchange<T: Transport>(
    t: &mut T,
    group: &ExtensionGroup,
    role: Role,
    seeds: &Seeds,
    config: &ExchangeConfig,
) -> Result<Session> {
    let n = group.stable_count();
    let hello = Frame::new(FrameType::Hello, hello_payload(group));
    match role {
        Role::A => {
            t.send(&hello)?;
            let f = expect(t, FrameType::Hello)?;
            check_hello(t, group, &f)?;
            let instance = instance_gen(group, &config.instance, seeds.instance)?;
            t.send(&Frame::new(FrameType::Instance, instance.to_bytes()))?;
            let (private, sent) = commit(group, &instance, Role::A, seeds.a, config.private_len)?;
            t.send(&Frame::new(FrameType::CommitA, sent.to_bytes()))?;
            let f = expect(t, FrameType::CommitB)?;
            let received = match Commitment::from_bytes(Role::B, &f.payload, n) {
                Ok(c) => c,
                Err(e) => return abort(t, e.into()),
            };
            let key = match derive_key(group, &private, &instance.s_tuple, &received) {
                Ok(k) => k,
                Err(e) => return abort(t, e.into()),
            };
            let f = expect(t, FrameType::KeyConf)?;
            check_keyconf(t, &key, &f)?;
            t.send(&Frame::new(FrameType::KeyConf, keyconf_tag(&key).to_vec()))?;
            Ok(Session { role, instance, private, sent, received, key })
        }
        Role::B => {
            let f = expect(t, FrameType::Hello)?;
            check_hello(t, group, &f)?;
            t.send(&hello)?;
            let f = expect(t, FrameType::Instance)?;
            let instance = match PublicInstance::from_bytes(group, &f.payload) {
                Ok(i) => i,
                Err(e) => return abort(t, e.into()),
            };
            let f = expect(t, FrameType::CommitA)?;
            let received = match Commitment::from_bytes(Role::A, &f.payload, n) {
                Ok(c) => c,
                Err(e) => return abort(t, e.into()),
            };
            let (private, sent) = commit(group, &instance, Role::B, seeds.b, config.private_len)?;
            t.send(&Frame::new(FrameType::CommitB, sent.to_bytes()))?;
            let key = match derive_key(group, &private, &instance.t_tuple, &received) {
                Ok(k) => k,
                Err(e) => return abort(t, e.into()),
            };
            t.send(&Frame::new(FrameType::KeyConf, keyconf_tag(&key).to_vec()))?;
            let f = expect(t, FrameType::KeyConf)?;
            check_keyconf(t, &key, &f)?;
            Ok(Session { role, instance, private, sent, received, key })
        }
    }
}

/// Both sides of one run, each with its own outcome.
pub struct PairOutcome {
    pub a: Result<Session>,
    pub b: Result<Session>,
    pub transcript: Transcript,
}

/// Runs A and B on two threads over an in-process pipe, logging every
/// frame. `tamper_b` rewrites frames B sends, as an attacker on the link.
pub fn run_in_process(
    group: &ExtensionGroup,
    seeds: &Seeds,
    config: &ExchangeConfig,
    tamper_b: Option<Tamper>,
) -> PairOutcome {
    let log = Arc::new(Mutex::new(Transcript::new()));
    let (ta, tb) = duplex();
    let mut ta = Tap::new(ta, Role::A, log.clone());
    let mut tb = Tap::new(tb, Role::B, log.clone());
    if let Some(f) = tamper_b {
        tb = tb.with_tamper(f);
    }
    let (gb, sb, cb) = (group.clone(), *seeds, *config);
    let hb = thread::spawn(move || {
        let r = run_exchange(&mut tb, &gb, Role::B, &sb, &cb);
        drop(tb);
        r
    });
    let a = run_exchange(&mut ta, group, Role::A, seeds, config);
    drop(ta);
    let b = hb.join().unwrap_or_else(|_| Err(HarnessError::Protocol("role B panicked".into())));
    let transcript = Arc::try_unwrap(log).expect("both taps dropped").into_inner().expect("transcript lock");
    PairOutcome { a, b, transcript }
}

/// Text printed by `demo`: transcript summary and both digests, with no
/// timing, so equal seeds give equal bytes.
pub fn demo_report(group: &ExtensionGroup, seed: u64, config: &ExchangeConfig, out: &PairOutcome) -> String {
    let mut s = String::new();
    s.push_str(&format!("seed      {seed}\n"));
    s.push_str(&format!("group     {}\n", hex(&group.digest())));
    s.push_str(&format!(
        "lengths   tuple words {}..{}, private words {}..{}\n",
        config.instance.word_len.0, config.instance.word_len.1, config.private_len.0, config.private_len.1
    ));
    if let Ok(a) = &out.a {
        s.push_str(&format!("instance  {}\n", hex(&a.instance.digest())));
    }
    s.push_str("transcript\n");
    for line in out.transcript.summary() {
        s.push_str(&format!("  {line}\n"));
    }
    let show = |r: &Result<Session>| match r {
        Ok(sess) => hex(&sess.key.digest),
        Err(e) => format!("failed: {e}"),
    };
    s.push_str(&format!("key A     {}\n", show(&out.a)));
    s.push_str(&format!("key B     {}\n", show(&out.b)));
    let agree = matches!((&out.a, &out.b), (Ok(a), Ok(b)) if a.key == b.key);
    s.push_str(if agree { "keys agree\n" } else { "keys DIFFER\n" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::ChannelTransport;

    fn quick() -> ExchangeConfig {
        ExchangeConfig { instance: InstanceParams::default(), private_len: (2, 4) }
    }

    #[test]
    fn honest_run_agrees_and_logs_seven_frames() {
        let g = ExtensionGroup::sample();
        let out = run_in_process(&g, &Seeds::from_master(7), &quick(), None);
        let (a, b) = (out.a.unwrap(), out.b.unwrap());
        assert_eq!(a.key, b.key);
        let t = &out.transcript;
        assert_eq!(t.entries().len(), 7);
        for (kind, n) in [
            (FrameType::Hello, 2),
            (FrameType::Instance, 1),
            (FrameType::CommitA, 1),
            (FrameType::CommitB, 1),
            (FrameType::KeyConf, 2),
        ] {
            assert_eq!(t.count(kind), n, "{}", kind.name());
        }
        let order: Vec<&str> = t.entries().iter().map(|e| e.kind).collect();
        assert_eq!(order, ["HELLO", "HELLO", "INSTANCE", "COMMIT_A", "COMMIT_B", "KEYCONF", "KEYCONF"]);
    }

    #[test]
    fn corrupted_commit_b_aborts_a_at_keyconf() {
        let g = ExtensionGroup::sample();
        let seeds = Seeds::from_master(11);
        let honest = run_in_process(&g, &seeds, &quick(), None);
        let bytes = honest.b.unwrap().sent.to_bytes();
        // Find a single-byte change that still decodes to a different element.
        let n = g.stable_count();
        let original = Commitment::from_bytes(Role::B, &bytes, n).unwrap();
        let (pos, val) = (0..bytes.len())
            .flat_map(|i| (1..=255u8).map(move |x| (i, x)))
            .find(|&(i, x)| {
                let mut c = bytes.clone();
                c[i] ^= x;
                matches!(Commitment::from_bytes(Role::B, &c, n), Ok(d) if d != original)
            })
            .unwrap();
        let tamper = Box::new(move |f: &mut Frame| {
            if f.kind == FrameType::CommitB {
                f.payload[pos] ^= val;
            }
        });
        let out = run_in_process(&g, &seeds, &quick(), Some(tamper));
        assert!(matches!(out.a, Err(HarnessError::DigestMismatch)));
        assert!(matches!(out.b, Err(HarnessError::PeerAbort(_))));
        assert_eq!(out.transcript.count(FrameType::Error), 1);
    }

    #[test]
    fn mismatched_group_fails_fast() {
        let g = ExtensionGroup::sample();
        let (mut ta, mut tb): (ChannelTransport, ChannelTransport) = duplex();
        let h = thread::spawn(move || {
            let f = tb.recv().unwrap();
            assert_eq!(f.kind, FrameType::Hello);
            let mut p = f.payload.clone();
            p[1] ^= 1;
            tb.send(&Frame::new(FrameType::Hello, p)).unwrap();
            tb.recv().unwrap()
        });
        let r = run_exchange(&mut ta, &g, Role::A, &Seeds::from_master(1), &quick());
        assert!(matches!(r, Err(HarnessError::GroupMismatch)));
        assert_eq!(h.join().unwrap().kind, FrameType::Error);
    }

    #[test]
    fn seeds_are_distinct_draws() {
        let s = Seeds::from_master(42);
        assert_eq!(s, Seeds::from_master(42));
        assert!(s.instance != s.a && s.a != s.b);
    }
}
