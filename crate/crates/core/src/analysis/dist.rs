use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::channel::interleave;
use crate::error::{Error, Result};
use crate::link::{random_blocks, AeSystem};
use crate::rng::SimRng;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistStats {
    pub samples: usize,
    pub mean: f64,
    /// Biased (population) variance.
    pub variance: f64,
    pub excess_kurtosis: f64,
    /// Two-sided Kolmogorov-Smirnov distance to `N(0, target_variance)`.
    pub ks: f64,
    pub target_variance: f64,
}

pub fn distribution_stats<T: Scalar>(samples: &[T], target_variance: f64) -> Result<DistStats> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    if !(target_variance > 0.0) {
        return Err(Error::InvalidArgument("target variance must be positive".into()));
    }
    let mut xs: Vec<f64> = samples.iter().map(|v| v.as_f64()).collect();
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("distribution samples"));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if !(m2 > 0.0) {
        return Err(Error::Degenerate("zero-variance samples"));
    }
    let m4 = xs.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;

    let normal = Normal::new(0.0, target_variance.sqrt()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    xs.sort_by(f64::total_cmp);
    let ks = xs.iter().enumerate().fold(0.0f64, |d, (i, &v)| {
        let f = normal.cdf(v);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    });
    Ok(DistStats { samples: xs.len(), mean, variance: m2, excess_kurtosis: m4 / (m2 * m2) - 3.0, ks, target_variance })
}

/// Pooled real components of `blocks` random normalized transmissions.
pub fn component_samples<T: Scalar>(system: &AeSystem<T>, blocks: usize, rng: &mut SimRng) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(blocks * system.n);
    for b in random_blocks(system, blocks, rng)? {
        out.extend(interleave(&system.transmit(&b)?.symbols));
    }
    Ok(out)
}
