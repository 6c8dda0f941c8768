//! Exhaustive and randomized codec checks against brute-force decoders.

use featherlink::ecc::{from_bits, hamming, to_bits, Codec, CodecKind};
use featherlink::rng;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, failures: usize, total: usize, what: &str) -> Check {
    Check { name, passed: failures == 0 && total > 0, detail: format!("{failures} failures in {total} {what}") }
}

fn codebook(codec: &dyn Codec) -> Vec<Vec<u8>> {
    (0..1usize << codec.k()).map(|m| codec.encode(&to_bits(m, codec.k())).expect("message width matches")).collect()
}

/// Index of the unique nearest codeword under `dist`, if unique.
fn nearest(book: &[Vec<u8>], word: &[u8], dist: impl Fn(&[u8], &[u8]) -> usize) -> (usize, Option<usize>) {
    let d: Vec<usize> = book.iter().map(|c| dist(c, word)).collect();
    let best = *d.iter().min().expect("non-empty codebook");
    let mut hits = d.iter().enumerate().filter(|(_, &x)| x == best);
    let first = hits.next().map(|(i, _)| i);
    (best, if hits.next().is_none() { first } else { None })
}

fn symbol_distance(a: &[u8], b: &[u8]) -> usize {
    a.chunks(3).zip(b.chunks(3)).filter(|(x, y)| x != y).count()
}

/// Every bit pattern of length `len` with at most `max_weight` ones.
fn error_patterns(len: usize, max_weight: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, len: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for p in start..len {
            cur.push(p);
            extend(p + 1, len, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(0, len, max_weight, &mut Vec::new(), &mut out);
    out
}

pub fn bch_checks() -> Vec<Check> {
    let codec = CodecKind::Bch14_4.codec();
    let book = codebook(codec);
    let light = book.iter().skip(1).filter(|c| c.iter().filter(|&&b| b == 1).count() < 7).count();
    let patterns = error_patterns(codec.k2(), 3);
    let mut failures = 0;
    for (m, word) in book.iter().enumerate() {
        for pattern in &patterns {
            let mut w = word.clone();
            for &p in pattern {
                w[p] ^= 1;
            }
            match codec.decode(&w) {
                Ok(d) if from_bits(&d.bits) == m && !d.failed => {}
                _ => failures += 1,
            }
        }
    }
    vec![
        check("bch_14_4 nonzero weight >= 7", light, book.len() - 1, "nonzero codewords"),
        check("bch_14_4 corrects <= 3 bit errors", failures, book.len() * patterns.len(), "message/error pairs"),
    ]
}

pub fn rs_checks(seed: u64, trials: usize) -> Vec<Check> {
    let codec = CodecKind::Rs21_9.codec();
    let book = codebook(codec);
    let mut min_distance = usize::MAX;
    for (i, a) in book.iter().enumerate() {
        for b in &book[i + 1..] {
            min_distance = min_distance.min(symbol_distance(a, b));
        }
    }
    let mut r = rng::derive(seed, &[0x5253]);
    let mut failures = 0;
    for _ in 0..trials {
        let m = r.random_range(0..book.len());
        let first = r.random_range(0..7usize);
        let second = (first + r.random_range(1..7usize)) % 7;
        let mut w = book[m].clone();
        for s in [first, second] {
            let e: usize = r.random_range(1..8);
            for (bit, v) in w[3 * s..3 * s + 3].iter_mut().zip(to_bits(e, 3)) {
                *bit ^= v;
            }
        }
        let (_, oracle) = nearest(&book, &w, symbol_distance);
        let decoded = codec.decode(&w).map(|d| from_bits(&d.bits)).ok();
        if oracle != Some(m) || decoded != Some(m) {
            failures += 1;
        }
    }
    vec![
        Check {
            name: "rs_21_9 minimum symbol distance 5",
            passed: min_distance == 5,
            detail: format!("minimum distance {min_distance} over {} codewords", book.len()),
        },
        check("rs_21_9 corrects 2 symbol errors", failures, trials, "random trials"),
    ]
}

pub fn conv_checks(seed: u64, trials: usize) -> Vec<Check> {
    let codec = CodecKind::Conv20_10.codec();
    let book = codebook(codec);
    let mut r = rng::derive(seed, &[0xC0DE]);
    let mut mismatches = 0;
    for _ in 0..trials {
        let m = r.random_range(0..book.len());
        let mut w = book[m].clone();
        for _ in 0..r.random_range(0..6) {
            w[r.random_range(0..codec.k2())] ^= 1;
        }
        let (best, unique) = nearest(&book, &w, hamming);
        let got = from_bits(&codec.decode(&w).expect("width matches").bits);
        if hamming(&book[got], &w) != best || unique.is_some_and(|u| u != got) {
            mismatches += 1;
        }
    }
    let mut single = 0;
    for (m, word) in book.iter().enumerate() {
        for p in 0..codec.k2() {
            let mut w = word.clone();
            w[p] ^= 1;
            if from_bits(&codec.decode(&w).expect("width matches").bits) != m {
                single += 1;
            }
        }
    }
    vec![
        check("conv_20_10 Viterbi equals brute-force ML", mismatches, trials, "corrupted words"),
        check("conv_20_10 corrects every single-bit error", single, book.len() * codec.k2(), "message/flip pairs"),
    ]
}

pub fn run_all(seed: u64) -> Vec<Check> {
    let mut out = bch_checks();
    out.extend(rs_checks(seed, 10_000));
    out.extend(conv_checks(seed, 10_000));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_enumeration_counts() {
        // 1 + 14 + 91 + 364
        assert_eq!(error_patterns(14, 3).len(), 470);
        assert_eq!(error_patterns(4, 4).len(), 16);
    }

    #[test]
    fn nearest_reports_ties() {
        let book = vec![vec![0, 0], vec![1, 1]];
        assert_eq!(nearest(&book, &[0, 1], hamming), (1, None));
        assert_eq!(nearest(&book, &[1, 1], hamming), (0, Some(1)));
    }
}
