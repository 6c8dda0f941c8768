//! Classical codecs for the coded binary-input transceiver.
//!
//! | name         | code                                  | k  | k2 |
//! |--------------|---------------------------------------|----|----|
//! | `bch_14_4`   | BCH(15,5) shortened by one bit, t = 3 | 4  | 14 |
//! | `rs_21_9`    | RS(7,3) over GF(8), t = 2 symbols     | 9  | 21 |
//! | `conv_20_10` | rate-1/2 K=3 (7,5), tail-biting       | 10 | 20 |
//!
//! Bits are `u8` values in `{0, 1}`. Decoders always return a decision; when
//! the algebraic decoder cannot locate the errors it hands back the systematic
//! part of the received word unchanged and flags the failure.

mod bch;
mod conv;
pub mod gf;
mod rs;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use bch::Bch14_4;
pub use conv::Conv20_10;
pub use gf::GaloisField;
pub use rs::Rs21_9;

use crate::error::{check_dim, Error, Result};

/// Outcome of a decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub bits: Vec<u8>,
    /// Number of code bits (BCH, conv) or symbols (RS) the decoder flipped.
    pub corrected: usize,
    /// The algebraic decoder gave up; `bits` are the uncorrected systematic bits.
    pub failed: bool,
}

pub trait Codec: Send + Sync {
    fn name(&self) -> &'static str;
    /// Source bits per block.
    fn k(&self) -> usize;
    /// Coded bits per block.
    fn k2(&self) -> usize;
    /// Human-readable correction capability.
    fn capability(&self) -> &'static str;
    fn encode(&self, message: &[u8]) -> Result<Vec<u8>>;
    fn decode(&self, received: &[u8]) -> Result<Decoded>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodecKind {
    #[serde(rename = "bch_14_4")]
    Bch14_4,
    #[serde(rename = "rs_21_9")]
    Rs21_9,
    #[serde(rename = "conv_20_10")]
    Conv20_10,
}

impl CodecKind {
    pub const ALL: [CodecKind; 3] = [CodecKind::Bch14_4, CodecKind::Rs21_9, CodecKind::Conv20_10];

    pub fn name(self) -> &'static str {
        match self {
            CodecKind::Bch14_4 => "bch_14_4",
            CodecKind::Rs21_9 => "rs_21_9",
            CodecKind::Conv20_10 => "conv_20_10",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name).ok_or_else(|| Error::UnknownCodec(name.to_string()))
    }

    /// Shared codec instance (tables are built once).
    pub fn codec(self) -> &'static dyn Codec {
        static BCH: OnceLock<Bch14_4> = OnceLock::new();
        static RS: OnceLock<Rs21_9> = OnceLock::new();
        match self {
            CodecKind::Bch14_4 => BCH.get_or_init(Bch14_4::new),
            CodecKind::Rs21_9 => RS.get_or_init(Rs21_9::new),
            CodecKind::Conv20_10 => &Conv20_10,
        }
    }
}

impl std::fmt::Display for CodecKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn codec_by_name(name: &str) -> Result<&'static dyn Codec> {
    Ok(CodecKind::from_name(name)?.codec())
}

pub(crate) fn check_bits(context: &'static str, expected: usize, bits: &[u8]) -> Result<()> {
    check_dim(context, expected, bits.len())?;
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidArgument(format!("{context}: bits must be 0 or 1")));
    }
    Ok(())
}

/// `value` as `width` bits, most significant first.
pub fn to_bits(value: usize, width: usize) -> Vec<u8> {
    (0..width).rev().map(|i| ((value >> i) & 1) as u8).collect()
}

/// Inverse of [`to_bits`].
pub fn from_bits(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}
