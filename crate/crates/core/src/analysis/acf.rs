use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{random_blocks, AeSystem};
use crate::rng::{self, SimRng};
use crate::Scalar;

/// `|ρ(τ)| = |Σ x_i conj(x_{i+τ})| / Σ |x_i|²` for `τ = 1..=max_lag`.
pub fn acf<T: Scalar>(x: &[Complex<T>], max_lag: usize) -> Result<Vec<T>> {
    if max_lag == 0 || x.len() <= max_lag {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= max_lag < len, got max_lag {max_lag} for {} samples",
            x.len()
        )));
    }
    let energy: T = x.iter().map(|c| c.norm_sqr()).sum();
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(Error::Degenerate("zero-energy sequence"));
    }
    Ok((1..=max_lag)
        .map(|tau| {
            let s = x[..x.len() - tau]
                .iter()
                .zip(&x[tau..])
                .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b.conj());
            s.norm() / energy
        })
        .collect())
}

/// Something that emits complex baseband sequences for the ACF campaign.
pub trait SignalSource<T>: Sync {
    fn generate(&self, len: usize, rng: &mut SimRng) -> Result<Vec<Complex<T>>>;
}

/// i.i.d. unit-power circular complex Gaussian samples.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussianSource;

impl<T: Scalar> SignalSource<T> for GaussianSource {
    fn generate(&self, len: usize, rng: &mut SimRng) -> Result<Vec<Complex<T>>> {
        Ok(crate::channel::draw_noise(len, T::FRAC_1_SQRT_2(), rng))
    }
}

/// Concatenated transmissions of independent random message blocks,
/// truncated to the requested length.
pub struct AeSource<'a, T> {
    pub system: &'a AeSystem<T>,
}

impl<T: Scalar> SignalSource<T> for AeSource<'_, T> {
    fn generate(&self, len: usize, rng: &mut SimRng) -> Result<Vec<Complex<T>>> {
        let per_block = self.system.symbols_per_block();
        let blocks = random_blocks(self.system, len.div_ceil(per_block), rng)?;
        let mut out = Vec::with_capacity(blocks.len() * per_block);
        for b in &blocks {
            out.extend(self.system.transmit(b)?.symbols);
        }
        out.truncate(len);
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcfCampaign {
    pub runs: usize,
    pub length: usize,
    pub max_lag: usize,
    pub seed: u64,
}

impl Default for AcfCampaign {
    fn default() -> Self {
        Self { runs: 10_000, length: 1000, max_lag: 50, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcfReport {
    /// Mean over runs of `|ρ(τ)|`, `τ = 1..=max_lag`.
    pub per_lag: Vec<f64>,
    /// Largest entry of `per_lag`.
    pub max_abs: f64,
    pub runs: usize,
    /// Mean over runs of each run's maximum over lags.
    pub mean_max_abs: f64,
    pub std_error: f64,
}

/// Runs are independent (one RNG stream each) and evaluated in parallel;
/// results are reduced in run order, so the report is seed-deterministic.
pub fn acf_campaign<T: Scalar, S: SignalSource<T> + ?Sized>(source: &S, campaign: &AcfCampaign) -> Result<AcfReport> {
    if campaign.runs == 0 {
        return Err(Error::InvalidArgument("acf campaign needs at least one run".into()));
    }
    let rows: Vec<Vec<T>> = (0..campaign.runs)
        .into_par_iter()
        .map(|run| {
            let mut r = rng::derive(campaign.seed, &[rng::tag::ACF, run as u64]);
            let x = source.generate(campaign.length, &mut r)?;
            if x.len() < campaign.length {
                return Err(Error::InvalidArgument(format!(
                    "source produced {} symbols, need {}",
                    x.len(),
                    campaign.length
                )));
            }
            acf(&x, campaign.max_lag)
        })
        .collect::<Result<_>>()?;

    let runs = rows.len() as f64;
    let mut per_lag = vec![0.0; campaign.max_lag];
    let mut maxima = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut m = 0.0f64;
        for (acc, v) in per_lag.iter_mut().zip(row) {
            let v = v.as_f64();
            *acc += v;
            m = m.max(v);
        }
        maxima.push(m);
    }
    per_lag.iter_mut().for_each(|v| *v /= runs);
    let mean = maxima.iter().sum::<f64>() / runs;
    let std_error = if maxima.len() > 1 {
        let var = maxima.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (runs - 1.0);
        (var / runs).sqrt()
    } else {
        0.0
    };
    Ok(AcfReport {
        max_abs: per_lag.iter().copied().fold(0.0, f64::max),
        per_lag,
        runs: rows.len(),
        mean_max_abs: mean,
        std_error,
    })
}
