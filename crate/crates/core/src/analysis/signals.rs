use num_complex::Complex;
use rand::Rng;

use super::acf::SignalSource;
use crate::error::{Error, Result};
use crate::link::{random_blocks, AeSystem};
use crate::rng::SimRng;
use crate::Scalar;

/// Gray-mapped unit-power QPSK: bit pair `(b1, b0)` goes to
/// `((1 - 2 b1) + i (1 - 2 b0)) / sqrt(2)`.
pub fn qpsk_modulate<T: Scalar>(bits: &[u8]) -> Result<Vec<Complex<T>>> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("QPSK needs an even bit count, got {}", bits.len())));
    }
    let s = T::FRAC_1_SQRT_2();
    let level = |b: u8| -> Result<T> {
        match b {
            0 => Ok(s),
            1 => Ok(-s),
            _ => Err(Error::InvalidArgument(format!("bit value {b}"))),
        }
    };
    bits.chunks_exact(2).map(|p| Ok(Complex::new(level(p[0])?, level(p[1])?))).collect()
}

/// Binary maximal-length sequence from the Fibonacci LFSR
/// `a[j + m] = XOR of a[j + t]` over `taps` (exponents below `m`, including 0),
/// seeded with `0...01`.
pub fn msequence(degree: u32, taps: &[u32]) -> Result<Vec<u8>> {
    if !(2..=24).contains(&degree) || taps.iter().any(|&t| t >= degree) || !taps.contains(&0) {
        return Err(Error::InvalidArgument("invalid LFSR degree or taps".into()));
    }
    let len = (1usize << degree) - 1;
    let mut a = vec![0u8; degree as usize];
    a[degree as usize - 1] = 1;
    while a.len() < len {
        let j = a.len() - degree as usize;
        let next = taps.iter().fold(0, |acc, &t| acc ^ a[j + t as usize]);
        a.push(next);
    }
    let ones = a.iter().filter(|&&b| b == 1).count();
    let period_ok = (1..len).all(|shift| (0..degree as usize).any(|i| a[i] != a[(i + shift) % len]));
    if ones != len.div_ceil(2) || !period_ok {
        return Err(Error::InvalidArgument("taps do not give a maximal-length sequence".into()));
    }
    Ok(a)
}

/// Length-31 m-sequence of `x^5 + x^2 + 1`.
pub fn msequence_31() -> Vec<u8> {
    msequence(5, &[0, 2]).expect("x^5 + x^2 + 1 is primitive")
}

/// BPSK data spread by the PN sequence: each data bit covers
/// `periods_per_bit` full PN periods. Chips are `±1`, so power is one.
pub fn dsss_spread<T: Scalar>(bits: &[u8], pn: &[u8], periods_per_bit: usize) -> Result<Vec<Complex<T>>> {
    if pn.is_empty() || periods_per_bit == 0 {
        return Err(Error::InvalidArgument("empty PN sequence or zero periods per bit".into()));
    }
    let sign = |b: u8| if b == 0 { T::one() } else { -T::one() };
    let mut out = Vec::with_capacity(bits.len() * pn.len() * periods_per_bit);
    for &d in bits {
        for _ in 0..periods_per_bit {
            out.extend(pn.iter().map(|&c| Complex::new(sign(d) * sign(c), T::zero())));
        }
    }
    Ok(out)
}

/// Random-bit QPSK symbols.
#[derive(Clone, Copy, Debug, Default)]
pub struct QpskSource;

impl<T: Scalar> SignalSource<T> for QpskSource {
    fn generate(&self, len: usize, rng: &mut SimRng) -> Result<Vec<Complex<T>>> {
        let bits: Vec<u8> = (0..2 * len).map(|_| rng.random_range(0..2u8)).collect();
        qpsk_modulate(&bits)
    }
}

/// Random-bit DSSS chips, starting at a random chip offset within a bit.
#[derive(Clone, Debug)]
pub struct DsssSource {
    pub pn: Vec<u8>,
    pub periods_per_bit: usize,
}

impl Default for DsssSource {
    fn default() -> Self {
        Self { pn: msequence_31(), periods_per_bit: 4 }
    }
}

impl<T: Scalar> SignalSource<T> for DsssSource {
    fn generate(&self, len: usize, rng: &mut SimRng) -> Result<Vec<Complex<T>>> {
        let per_bit = self.pn.len() * self.periods_per_bit.max(1);
        let offset = rng.random_range(0..per_bit);
        let bits: Vec<u8> = (0..(len + offset).div_ceil(per_bit)).map(|_| rng.random_range(0..2u8)).collect();
        let chips = dsss_spread(&bits, &self.pn, self.periods_per_bit)?;
        Ok(chips[offset..offset + len].to_vec())
    }
}

/// All symbols of `num_blocks` random-message transmissions.
pub fn constellation_dump<T: Scalar>(
    system: &AeSystem<T>,
    num_blocks: usize,
    rng: &mut SimRng,
) -> Result<Vec<Complex<T>>> {
    let mut out = Vec::with_capacity(num_blocks * system.symbols_per_block());
    for b in random_blocks(system, num_blocks, rng)? {
        out.extend(system.transmit(&b)?.symbols);
    }
    Ok(out)
}
