//! Binary BCH(15,5), designed distance 7, shortened to (14,4).
//!
//! The generator is lcm(m₁, m₃, m₅) over GF(16) = x¹⁰+x⁸+x⁵+x⁴+x²+x+1.
//! Encoding is systematic: code bits are the coefficients of
//! `c(x) = u(x)·x¹⁰ + (u(x)·x¹⁰ mod g(x))` from x¹³ down to x⁰, so the first
//! four bits are the message. Shortening pins the x¹⁴ coefficient to zero.
//! Decoding runs Berlekamp–Massey on the six syndromes and a Chien search.

use super::{check_bits, Codec, Decoded, GaloisField};
use crate::error::Result;

const N: usize = 15;
const SHORT_N: usize = 14;
const K: usize = 4;
const PARITY: usize = 10;
const T: usize = 3;

#[derive(Clone, Debug)]
pub struct Bch14_4 {
    /// Bit `i` = coefficient of `x^i`.
    generator: u16,
}

/// Minimal polynomial of `α^i` over GF(2), as a bit mask.
fn minimal_polynomial(field: &GaloisField, i: usize) -> u16 {
    let n = field.order() - 1;
    let mut class = vec![i % n];
    loop {
        let next = class.last().unwrap() * 2 % n;
        if next == class[0] {
            break;
        }
        class.push(next);
    }
    let mut poly = vec![1u8];
    for e in class {
        poly = field.poly_mul(&poly, &[field.alpha_pow(e as i64), 1]);
    }
    poly.iter().enumerate().fold(0u16, |acc, (d, &c)| {
        debug_assert!(c <= 1, "minimal polynomial must be binary");
        acc | ((c as u16) << d)
    })
}

fn gf2_mul(a: u16, b: u16) -> u16 {
    (0..16).filter(|i| b >> i & 1 == 1).fold(0, |acc, i| acc ^ (a << i))
}

fn gf2_mod(mut a: u32, g: u16) -> u16 {
    let gd = 15 - g.leading_zeros();
    while a != 0 && 31 - a.leading_zeros() >= gd {
        let shift = 31 - a.leading_zeros() - gd;
        a ^= (g as u32) << shift;
    }
    a as u16
}

impl Bch14_4 {
    pub fn new() -> Self {
        let field = GaloisField::gf16();
        let mut classes: Vec<u16> = Vec::new();
        for i in [1, 3, 5] {
            let m = minimal_polynomial(field, i);
            if !classes.contains(&m) {
                classes.push(m);
            }
        }
        let generator = classes.into_iter().fold(1u16, gf2_mul);
        debug_assert_eq!(15 - generator.leading_zeros() as usize, PARITY);
        Self { generator }
    }

    pub fn generator(&self) -> u16 {
        self.generator
    }

    fn codeword_poly(&self, message: usize) -> u16 {
        let shifted = (message as u32) << PARITY;
        shifted as u16 | gf2_mod(shifted, self.generator)
    }
}

impl Default for Bch14_4 {
    fn default() -> Self {
        Self::new()
    }
}

impl Codec for Bch14_4 {
    fn name(&self) -> &'static str {
        "bch_14_4"
    }

    fn k(&self) -> usize {
        K
    }

    fn k2(&self) -> usize {
        SHORT_N
    }

    fn capability(&self) -> &'static str {
        "t = 3 bit errors (d = 7)"
    }

    fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        check_bits("bch message", K, message)?;
        let c = self.codeword_poly(super::from_bits(message));
        Ok(super::to_bits(c as usize, SHORT_N))
    }

    fn decode(&self, received: &[u8]) -> Result<Decoded> {
        check_bits("bch codeword", SHORT_N, received)?;
        let field = GaloisField::gf16();
        let word = super::from_bits(received) as u16;
        let coeffs: Vec<u8> = (0..N).map(|d| (word >> d & 1) as u8).collect();
        let syndromes: Vec<u8> = (1..=2 * T).map(|j| field.eval(&coeffs, field.alpha_pow(j as i64))).collect();
        let uncorrected = || Decoded { bits: received[..K].to_vec(), corrected: 0, failed: false };
        if syndromes.iter().all(|&s| s == 0) {
            return Ok(uncorrected());
        }
        let (locator, errors) = field.berlekamp_massey(&syndromes);
        let positions: Vec<usize> =
            (0..N).filter(|&p| field.eval(&locator, field.alpha_pow(-(p as i64))) == 0).collect();
        if errors > T || positions.len() != errors || positions.iter().any(|&p| p >= SHORT_N) {
            return Ok(Decoded { failed: true, ..uncorrected() });
        }
        let fixed = positions.iter().fold(word, |w, &p| w ^ (1 << p));
        Ok(Decoded { bits: super::to_bits((fixed >> PARITY) as usize, K), corrected: errors, failed: false })
    }
}
