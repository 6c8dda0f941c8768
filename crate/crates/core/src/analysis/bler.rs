use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::link::{AeSystem, Mode};
use crate::rng;
use crate::Scalar;

/// Blocks per independent RNG stream; fixed so results do not depend on the
/// thread count.
pub const BLER_CHUNK: usize = 1000;

const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `errors` out of `trials` at 95% confidence.
pub fn wilson_interval(errors: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if errors >= trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlerPoint {
    pub ebno_db: f64,
    pub blocks: usize,
    pub errors: usize,
    pub bler: f64,
    /// Half-width of the Wilson interval.
    pub ci95: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BlerPoint {
    pub fn new(ebno_db: f64, blocks: usize, errors: usize) -> Self {
        let (ci_low, ci_high) = wilson_interval(errors, blocks);
        Self {
            ebno_db,
            blocks,
            errors,
            bler: if blocks == 0 { 0.0 } else { errors as f64 / blocks as f64 },
            ci95: (ci_high - ci_low) / 2.0,
            ci_low,
            ci_high,
        }
    }

    /// True when the two Wilson intervals intersect.
    pub fn overlaps(&self, other: &BlerPoint) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlerCurve {
    pub label: String,
    pub points: Vec<BlerPoint>,
}

/// Block-level curve for what the receiver outputs, plus the source-level
/// curve after ECC decoding for coded systems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlerCurves {
    pub raw: BlerCurve,
    pub decoded: Option<BlerCurve>,
}

fn raw_label<T>(system: &AeSystem<T>) -> &'static str {
    match system.mode {
        Mode::OneHot => "one_hot_input",
        Mode::BinaryDirect => "k_bit_input",
        Mode::BinaryCoded => "coded_input",
    }
}

/// Monte-Carlo BLER at each Eb/N0 with `blocks` random source words per
/// point. `channel` fixes kind, receiver CSI and the seed; its own Eb/N0 is
/// replaced by each entry of `ebno_db`.
pub fn bler_campaign<T: Scalar>(
    system: &AeSystem<T>,
    channel: &ChannelSpec<T>,
    ebno_db: &[f64],
    blocks: usize,
) -> Result<BlerCurves> {
    if blocks == 0 {
        return Err(Error::InvalidArgument("bler campaign needs at least one block".into()));
    }
    let codec = match system.mode {
        Mode::BinaryCoded => system.codec.map(|c| c.codec()),
        _ => None,
    };
    let mut raw = BlerCurve { label: raw_label(system).into(), points: Vec::with_capacity(ebno_db.len()) };
    let mut decoded =
        codec.map(|_| BlerCurve { label: "decoded_message".into(), points: Vec::with_capacity(ebno_db.len()) });

    for (point, &eb) in ebno_db.iter().enumerate() {
        let ch = channel.at_ebno(T::lit(eb))?;
        let chunks = blocks.div_ceil(BLER_CHUNK);
        let counts: Vec<(usize, usize)> = (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut r = rng::derive(channel.rng_seed, &[rng::tag::EVAL, point as u64, chunk as u64]);
                let count = BLER_CHUNK.min(blocks - chunk * BLER_CHUNK);
                let (mut raw_errors, mut dec_errors) = (0, 0);
                for _ in 0..count {
                    let source: Vec<u8> = (0..system.k).map(|_| r.random_range(0..2u8)).collect();
                    let block = system.source_to_block(&source)?;
                    let x = system.transmit(&block)?;
                    let y = ch.propagate(&x.symbols, &mut r)?;
                    let rx = system.receive(&y)?;
                    if rx.block != block {
                        raw_errors += 1;
                    }
                    if let Some(c) = codec {
                        if c.decode(rx.block.bits())?.bits != source {
                            dec_errors += 1;
                        }
                    }
                }
                Ok((raw_errors, dec_errors))
            })
            .collect::<Result<_>>()?;
        let (re, de) = counts.iter().fold((0, 0), |(a, b), &(x, y)| (a + x, b + y));
        raw.points.push(BlerPoint::new(eb, blocks, re));
        if let Some(d) = decoded.as_mut() {
            d.points.push(BlerPoint::new(eb, blocks, de));
        }
    }
    Ok(BlerCurves { raw, decoded })
}
