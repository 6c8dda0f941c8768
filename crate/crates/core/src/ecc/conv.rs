//! Rate-1/2, constraint length 3 convolutional code with octal generators
//! (7, 5) in tail-biting form: the encoder starts in the state its last two
//! message bits leave it in, so a 10-bit message maps to exactly 20 coded bits
//! with minimum distance 5. Decoding runs a 4-state Viterbi search once per
//! start state and keeps the best path that ends where it began.

use super::{check_bits, Codec, Decoded};
use crate::error::{check_dim, Result};

const K: usize = 10;
const K2: usize = 2 * K;
const STATES: usize = 4;

#[derive(Clone, Copy, Debug, Default)]
pub struct Conv20_10;

/// State = (previous input << 1) | input before that.
#[inline]
fn branch(state: usize, input: u8) -> (usize, [u8; 2]) {
    let (s1, s2) = ((state >> 1) as u8, (state & 1) as u8);
    let out = [input ^ s1 ^ s2, input ^ s2];
    (((input as usize) << 1) | s1 as usize, out)
}

/// State after the last two bits of `bits`.
fn wrap_state(bits: &[u8]) -> usize {
    match bits {
        [.., a, b] => ((*b as usize) << 1) | *a as usize,
        [b] => (*b as usize) << 1,
        [] => 0,
    }
}

impl Conv20_10 {
    /// Tail-biting encoding of an arbitrary-length bit string.
    pub fn encode_stream(bits: &[u8]) -> Vec<u8> {
        let mut state = wrap_state(bits);
        let mut out = Vec::with_capacity(bits.len() * 2);
        for &b in bits {
            let (next, o) = branch(state, b);
            out.extend_from_slice(&o);
            state = next;
        }
        out
    }

    /// Best path from `start` back to `start` and its metric.
    fn viterbi_from(received: &[f64], start: usize) -> (f64, Vec<u8>) {
        let steps = received.len() / 2;
        let mut metric = [f64::INFINITY; STATES];
        metric[start] = 0.0;
        // survivors[t][s] = (previous state, input bit)
        let mut survivors = vec![[(0usize, 0u8); STATES]; steps];
        for t in 0..steps {
            let r = &received[2 * t..2 * t + 2];
            let mut next = [f64::INFINITY; STATES];
            // predecessors visited with oldest bit 0 first; strict `<` keeps them on ties
            for s2 in 0..2usize {
                for s1 in 0..2usize {
                    let prev = (s1 << 1) | s2;
                    if !metric[prev].is_finite() {
                        continue;
                    }
                    for input in 0..2u8 {
                        let (ns, out) = branch(prev, input);
                        let bm = (r[0] - out[0] as f64).powi(2) + (r[1] - out[1] as f64).powi(2);
                        let m = metric[prev] + bm;
                        if m < next[ns] {
                            next[ns] = m;
                            survivors[t][ns] = (prev, input);
                        }
                    }
                }
            }
            metric = next;
        }
        let mut state = start;
        let mut bits = vec![0u8; steps];
        for t in (0..steps).rev() {
            let (prev, input) = survivors[t][state];
            bits[t] = input;
            state = prev;
        }
        (metric[start], bits)
    }

    /// Viterbi with squared-distance branch metrics against soft values in
    /// `[0, 1]` (probability of a one); for hard 0/1 input this is Hamming
    /// distance. A path that ends in its start state is always a tail-biting
    /// codeword, so the best such path over all four starts is the ML word.
    /// Equal-metric merges keep the predecessor whose oldest bit is zero;
    /// equal totals keep the lowest start state.
    pub fn viterbi(received: &[f64]) -> Vec<u8> {
        assert!(received.len().is_multiple_of(2), "received length must be even");
        let mut best = (f64::INFINITY, Vec::new());
        for start in 0..STATES {
            let (m, bits) = Self::viterbi_from(received, start);
            if m < best.0 {
                best = (m, bits);
            }
        }
        best.1
    }

    pub fn decode_soft(&self, received: &[f64]) -> Result<Vec<u8>> {
        check_dim("conv soft codeword", K2, received.len())?;
        Ok(Self::viterbi(received))
    }
}

impl Codec for Conv20_10 {
    fn name(&self) -> &'static str {
        "conv_20_10"
    }

    fn k(&self) -> usize {
        K
    }

    fn k2(&self) -> usize {
        K2
    }

    fn capability(&self) -> &'static str {
        "maximum-likelihood tail-biting Viterbi, d_min = 5"
    }

    fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        check_bits("conv message", K, message)?;
        Ok(Self::encode_stream(message))
    }

    fn decode(&self, received: &[u8]) -> Result<Decoded> {
        check_bits("conv codeword", K2, received)?;
        let soft: Vec<f64> = received.iter().map(|&b| b as f64).collect();
        let bits = Self::viterbi(&soft);
        let corrected = super::hamming(&Self::encode_stream(&bits), received);
        Ok(Decoded { bits, corrected, failed: false })
    }
}
