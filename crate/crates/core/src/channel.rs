//! Eb/N0 bookkeeping and the differentiable AWGN / Rayleigh block-fading
//! channel layers.
//!
//! Convention: a block of `k` information bits occupies `n/2` complex channel
//! uses, so `R = 2k/n` bits per complex symbol, with unit average symbol
//! energy. The per-real-component noise standard deviation is
//! `sqrt(1 / (2 R Eb/N0))`.
//!
//! During backprop the noise `w` and the fading coefficient `h` are held
//! constant: AWGN has an identity Jacobian and Rayleigh multiplies the upstream
//! gradient by `conj(h)`.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Rayleigh => "rayleigh",
        })
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "awgn" => Ok(ChannelKind::Awgn),
            "rayleigh" => Ok(ChannelKind::Rayleigh),
            other => Err(Error::InvalidArgument(format!("unknown channel `{other}` (expected awgn or rayleigh)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec<T> {
    pub kind: ChannelKind,
    pub ebno_db: T,
    pub k: usize,
    pub n: usize,
    pub noise_std: T,
    pub rng_seed: u64,
    /// Receiver is handed `h` and sees the zero-forced `y / h`.
    #[serde(default)]
    pub receiver_csi: bool,
}

impl<T: Scalar> ChannelSpec<T> {
    pub fn new(kind: ChannelKind, ebno_db: T, k: usize, n: usize, rng_seed: u64) -> Result<Self> {
        Ok(Self { kind, ebno_db, k, n, noise_std: ebno_to_noise_std(ebno_db, k, n)?, rng_seed, receiver_csi: false })
    }

    /// Same channel at another operating point.
    pub fn at_ebno(&self, ebno_db: T) -> Result<Self> {
        Ok(Self { ebno_db, noise_std: ebno_to_noise_std(ebno_db, self.k, self.n)?, ..self.clone() })
    }

    /// One block through the channel as the receiver sees it: `h x + w`, or
    /// `(h x + w) / h` with receiver CSI. AWGN draws no fading coefficient.
    pub fn propagate<R: Rng + ?Sized>(&self, x: &[Complex<T>], rng: &mut R) -> Result<Vec<Complex<T>>> {
        match self.kind {
            ChannelKind::Awgn => awgn_apply(x, self.noise_std, rng),
            ChannelKind::Rayleigh => {
                let (y, fading) = rayleigh_apply(x, self.noise_std, rng)?;
                Ok(if self.receiver_csi { y.into_iter().map(|v| v / fading.h).collect() } else { y })
            }
        }
    }

    /// Information bits per complex channel use.
    pub fn rate(&self) -> T {
        T::lit(2.0 * self.k as f64 / self.n as f64)
    }
}

/// Per-real-component noise standard deviation for unit-energy symbols.
pub fn ebno_to_noise_std<T: Scalar>(ebno_db: T, k: usize, n: usize) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n must be even and >= 2, got {n}")));
    }
    if ebno_db.is_nan() {
        return Err(Error::NonFinite("Eb/N0"));
    }
    let rate = T::lit(2.0 * k as f64 / n as f64);
    let ebno = T::lit(10.0).powf(ebno_db / T::lit(10.0));
    Ok((T::one() / (T::lit(2.0) * rate * ebno)).sqrt())
}

fn gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Complex noise with i.i.d. `N(0, noise_std²)` real and imaginary parts.
pub fn draw_noise<T: Scalar, R: Rng + ?Sized>(len: usize, noise_std: T, rng: &mut R) -> Vec<Complex<T>> {
    (0..len)
        .map(|_| {
            let re = gaussian::<T, _>(rng);
            let im = gaussian::<T, _>(rng);
            Complex::new(re * noise_std, im * noise_std)
        })
        .collect()
}

/// One circularly-symmetric complex Gaussian fading coefficient, `E|h|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingDraw<T> {
    pub h: Complex<T>,
}

impl<T: Scalar> FadingDraw<T> {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let s = T::FRAC_1_SQRT_2();
        let re = gaussian::<T, _>(rng);
        let im = gaussian::<T, _>(rng);
        Self { h: Complex::new(re * s, im * s) }
    }

    pub fn unity() -> Self {
        Self { h: Complex::new(T::one(), T::zero()) }
    }
}

fn check_std<T: Scalar>(noise_std: T) -> Result<()> {
    if noise_std.is_nan() || noise_std < T::zero() {
        return Err(Error::InvalidArgument(format!("noise_std must be >= 0, got {noise_std}")));
    }
    Ok(())
}

fn check_finite<T: Scalar>(x: &[Complex<T>]) -> Result<()> {
    if x.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("channel input"))
    }
}

/// `y = x + w`.
pub fn awgn_apply<T: Scalar, R: Rng + ?Sized>(x: &[Complex<T>], noise_std: T, rng: &mut R) -> Result<Vec<Complex<T>>> {
    check_std(noise_std)?;
    check_finite(x)?;
    let w = draw_noise(x.len(), noise_std, rng);
    Ok(x.iter().zip(w).map(|(&xi, wi)| xi + wi).collect())
}

/// `y = h x + w` with a single `h` for the whole block.
pub fn rayleigh_apply<T: Scalar, R: Rng + ?Sized>(
    x: &[Complex<T>],
    noise_std: T,
    rng: &mut R,
) -> Result<(Vec<Complex<T>>, FadingDraw<T>)> {
    check_std(noise_std)?;
    check_finite(x)?;
    let fading = FadingDraw::draw(rng);
    let w = draw_noise(x.len(), noise_std, rng);
    Ok((apply_with(x, fading.h, &w), fading))
}

/// Deterministic channel given its random draws.
pub fn apply_with<T: Scalar>(x: &[Complex<T>], h: Complex<T>, w: &[Complex<T>]) -> Vec<Complex<T>> {
    x.iter().zip(w).map(|(&xi, &wi)| h * xi + wi).collect()
}

/// Upstream gradient w.r.t. `y` pulled back to `x` (noise and fading constant).
pub fn pullback<T: Scalar>(grad_y: &[Complex<T>], h: Complex<T>) -> Vec<Complex<T>> {
    let hc = h.conj();
    grad_y.iter().map(|&g| hc * g).collect()
}

/// Interleave complex symbols into `[re0, im0, re1, im1, ...]`.
pub fn interleave<T: Scalar>(symbols: &[Complex<T>]) -> Vec<T> {
    symbols.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Inverse of [`interleave`]; `reals` must have even length.
pub fn deinterleave<T: Scalar>(reals: &[T]) -> Vec<Complex<T>> {
    reals.chunks_exact(2).map(|p| Complex::new(p[0], p[1])).collect()
}
