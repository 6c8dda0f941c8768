//! Reed–Solomon RS(7,3) over GF(8) (x³ + x + 1), narrow sense: the generator
//! has roots α¹..α⁴. Symbols pack three bits each, most significant bit first;
//! the codeword lists coefficients from x⁶ down to x⁰ so the first three
//! symbols (nine bits) are the message. Decoding is Berlekamp–Massey, Chien
//! search and Forney.

use super::{check_bits, Codec, Decoded, GaloisField};
use crate::error::Result;

const N: usize = 7;
const K: usize = 3;
const PARITY: usize = N - K;
const T: usize = 2;
const SYMBOL_BITS: usize = 3;

#[derive(Clone, Debug)]
pub struct Rs21_9 {
    /// Ascending coefficients, monic, degree 4.
    generator: Vec<u8>,
}

impl Rs21_9 {
    pub fn new() -> Self {
        let f = GaloisField::gf8();
        let generator = (1..=PARITY as i64).fold(vec![1u8], |g, i| f.poly_mul(&g, &[f.alpha_pow(i), 1]));
        Self { generator }
    }

    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    /// Systematic codeword, ascending coefficients.
    pub fn encode_symbols(&self, message: &[u8; K]) -> [u8; N] {
        let f = GaloisField::gf8();
        // remainder of u(x)·x⁴ mod g(x), long division from the top
        let mut rem = [0u8; N];
        for (i, &m) in message.iter().enumerate() {
            rem[N - 1 - i] = m;
        }
        for top in (PARITY..N).rev() {
            let coef = rem[top];
            if coef != 0 {
                for (j, &g) in self.generator.iter().enumerate() {
                    rem[top - PARITY + j] ^= f.mul(coef, g);
                }
            }
        }
        let mut word = [0u8; N];
        for (i, &m) in message.iter().enumerate() {
            word[N - 1 - i] = m;
        }
        word[..PARITY].copy_from_slice(&rem[..PARITY]);
        word
    }

    /// Corrects up to two symbol errors in an ascending-coefficient word.
    /// Returns the corrected word and the number of fixed symbols, or `None`.
    pub fn correct_symbols(&self, word: &[u8; N]) -> Option<([u8; N], usize)> {
        let f = GaloisField::gf8();
        let syndromes: Vec<u8> = (1..=2 * T).map(|j| f.eval(word, f.alpha_pow(j as i64))).collect();
        if syndromes.iter().all(|&s| s == 0) {
            return Some((*word, 0));
        }
        let (locator, errors) = f.berlekamp_massey(&syndromes);
        if errors > T {
            return None;
        }
        let positions: Vec<usize> = (0..N).filter(|&p| f.eval(&locator, f.alpha_pow(-(p as i64))) == 0).collect();
        if positions.len() != errors {
            return None;
        }
        // Ω(x) = S(x)Λ(x) mod x^{2t}
        let mut omega = f.poly_mul(&syndromes, &locator);
        omega.truncate(2 * T);
        // formal derivative: odd-degree terms survive in characteristic 2
        let derivative: Vec<u8> =
            locator.iter().enumerate().skip(1).map(|(d, &c)| if d % 2 == 1 { c } else { 0 }).collect();
        let mut fixed = *word;
        for &p in &positions {
            let x_inv = f.alpha_pow(-(p as i64));
            let denom = f.eval(&derivative, x_inv);
            if denom == 0 {
                return None;
            }
            fixed[p] ^= f.div(f.eval(&omega, x_inv), denom);
        }
        let clean = (1..=2 * T).all(|j| f.eval(&fixed, f.alpha_pow(j as i64)) == 0);
        clean.then_some((fixed, errors))
    }
}

impl Default for Rs21_9 {
    fn default() -> Self {
        Self::new()
    }
}

fn bits_to_symbols(bits: &[u8]) -> Vec<u8> {
    bits.chunks_exact(SYMBOL_BITS).map(|c| super::from_bits(c) as u8).collect()
}

fn symbols_to_bits(symbols: impl Iterator<Item = u8>) -> Vec<u8> {
    symbols.flat_map(|s| super::to_bits(s as usize, SYMBOL_BITS)).collect()
}

impl Codec for Rs21_9 {
    fn name(&self) -> &'static str {
        "rs_21_9"
    }

    fn k(&self) -> usize {
        K * SYMBOL_BITS
    }

    fn k2(&self) -> usize {
        N * SYMBOL_BITS
    }

    fn capability(&self) -> &'static str {
        "t = 2 symbol errors (d = 5 over GF(8))"
    }

    fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        check_bits("rs message", K * SYMBOL_BITS, message)?;
        let s = bits_to_symbols(message);
        let word = self.encode_symbols(&[s[0], s[1], s[2]]);
        Ok(symbols_to_bits(word.iter().rev().copied()))
    }

    fn decode(&self, received: &[u8]) -> Result<Decoded> {
        check_bits("rs codeword", N * SYMBOL_BITS, received)?;
        let mut word = [0u8; N];
        for (i, s) in bits_to_symbols(received).into_iter().enumerate() {
            word[N - 1 - i] = s;
        }
        Ok(match self.correct_symbols(&word) {
            Some((fixed, corrected)) => {
                Decoded { bits: symbols_to_bits((0..K).map(|i| fixed[N - 1 - i])), corrected, failed: false }
            }
            None => Decoded { bits: received[..K * SYMBOL_BITS].to_vec(), corrected: 0, failed: true },
        })
    }
}
