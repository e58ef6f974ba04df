//! Counter-based random streams.
//!
//! A [`StreamKey`] is a 256-bit digest of the master seed and the label path
//! leading to it. Each key seeds its own ChaCha8 generator, so a trial,
//! copy or draw gets the same bits no matter which thread runs it or in
//! which order the work is scheduled.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey([u8; 32]);

/// Something that can name a child stream.
pub trait Label {
    fn encode(&self, out: &mut Vec<u8>);
}

impl Label for &str {
    fn encode(&self, out: &mut Vec<u8>) {
        out.push(b's');
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        out.extend_from_slice(self.as_bytes());
    }
}

impl Label for String {
    fn encode(&self, out: &mut Vec<u8>) {
        self.as_str().encode(out)
    }
}

impl Label for u64 {
    fn encode(&self, out: &mut Vec<u8>) {
        out.push(b'u');
        out.extend_from_slice(&8u64.to_le_bytes());
        out.extend_from_slice(&self.to_le_bytes());
    }
}

impl Label for usize {
    fn encode(&self, out: &mut Vec<u8>) {
        (*self as u64).encode(out)
    }
}

impl Label for u32 {
    fn encode(&self, out: &mut Vec<u8>) {
        (*self as u64).encode(out)
    }
}

impl StreamKey {
    pub fn root(master_seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"specest/root");
        h.update(master_seed.to_le_bytes());
        StreamKey(h.finalize().into())
    }

    pub fn child<L: Label>(&self, label: L) -> Self {
        let mut buf = Vec::with_capacity(48);
        label.encode(&mut buf);
        let mut h = Sha256::new();
        h.update(self.0);
        h.update(&buf);
        StreamKey(h.finalize().into())
    }

    /// Shorthand for `child(i as u64)`.
    pub fn index(&self, i: usize) -> Self {
        self.child(i as u64)
    }

    pub fn rng(&self) -> StreamRng {
        ChaCha8Rng::from_seed(self.0)
    }

    pub fn bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

/// Generator for the stream reached from `master_seed` along `labels`.
pub fn derive_stream(master_seed: u64, labels: &[&str]) -> StreamRng {
    labels.iter().fold(StreamKey::root(master_seed), |k, l| k.child(*l)).rng()
}
