use num_complex::Complex;

use crate::channel::deinterleave;
use crate::error::{Error, Result};
use crate::Scalar;

/// One power-normalized block of complex baseband symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct TxSignal<T> {
    pub symbols: Vec<Complex<T>>,
}

impl<T: Scalar> TxSignal<T> {
    pub fn mean_power(&self) -> T {
        let total: T = self.symbols.iter().map(|s| s.norm_sqr()).sum();
        total / T::from_usize_lossy(self.symbols.len())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

fn mean_power_of<T: Scalar>(v: &[T]) -> T {
    let sum: T = v.iter().map(|&x| x * x).sum();
    sum * T::lit(2.0) / T::from_usize_lossy(v.len())
}

/// Pairs `v` into complex symbols and scales the block to unit mean symbol power.
pub fn normalize_power<T: Scalar>(v: &[T]) -> Result<TxSignal<T>> {
    if v.is_empty() || !v.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "transmitter output length must be even and nonzero, got {}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("transmitter output"));
    }
    let power = mean_power_of(v);
    if power <= T::zero() {
        return Err(Error::Degenerate("all-zero transmitter block"));
    }
    let scale = power.sqrt().recip();
    let scaled: Vec<T> = v.iter().map(|&x| x * scale).collect();
    Ok(TxSignal { symbols: deinterleave(&scaled) })
}

/// Gradient w.r.t. the raw outputs `v` given the gradient w.r.t. the
/// normalized, interleaved outputs.
///
/// With `P = (2/n) Σ v²` and `x = v / √P`:
/// `∂L/∂v = g / √P − (2/n) · v (v·g) / P^{3/2}`.
pub fn normalize_power_pullback<T: Scalar>(v: &[T], grad_x: &[T]) -> Vec<T> {
    let power = mean_power_of(v);
    let root = power.sqrt();
    let dot: T = v.iter().zip(grad_x).map(|(&a, &g)| a * g).sum();
    let coef = T::lit(2.0) / T::from_usize_lossy(v.len()) * dot / (power * root);
    v.iter().zip(grad_x).map(|(&a, &g)| g / root - coef * a).collect()
}
