//! Task losses (categorical and binary cross-entropy), the Gaussian KL
//! regularizer, and their gradients. Logarithms are floored at [`LOG_FLOOR`].

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::Scalar;

pub const LOG_FLOOR: f64 = 1e-12;

fn clamped_ln<T: Scalar>(p: T) -> T {
    p.max(T::lit(LOG_FLOOR)).ln()
}

/// `−Σ sᵢ ln pᵢ`.
pub fn loss_ce<T: Scalar>(target: &[T], p: &[T]) -> Result<T> {
    check_dim("cross-entropy", target.len(), p.len())?;
    Ok(-target.iter().zip(p).map(|(&s, &pi)| s * clamped_ln(pi)).sum::<T>())
}

/// `∂CE/∂p` for a one-hot target at `index`.
pub fn ce_grad<T: Scalar>(index: usize, p: &[T]) -> Vec<T> {
    let mut g = vec![T::zero(); p.len()];
    if p[index] > T::lit(LOG_FLOOR) {
        g[index] = -p[index].recip();
    }
    g
}

/// Mean over bits of `−[t ln p + (1−t) ln(1−p)]`.
pub fn loss_bce<T: Scalar>(target: &[T], p: &[T]) -> Result<T> {
    check_dim("binary cross-entropy", target.len(), p.len())?;
    if p.is_empty() {
        return Err(Error::InvalidArgument("empty prediction".into()));
    }
    let total: T =
        target.iter().zip(p).map(|(&t, &pi)| t * clamped_ln(pi) + (T::one() - t) * clamped_ln(T::one() - pi)).sum();
    Ok(-total / T::from_usize_lossy(p.len()))
}

pub fn bce_grad<T: Scalar>(target: &[T], p: &[T]) -> Vec<T> {
    let floor = T::lit(LOG_FLOOR);
    let len = T::from_usize_lossy(p.len());
    target
        .iter()
        .zip(p)
        .map(|(&t, &pi)| {
            let q = T::one() - pi;
            let mut g = T::zero();
            if pi > floor {
                g = g - t / pi;
            }
            if q > floor {
                g = g + (T::one() - t) / q;
            }
            g / len
        })
        .collect()
}

/// Pooled sample mean and (biased) variance.
pub fn pooled_moments<T: Scalar>(components: &[T]) -> Result<(T, T)> {
    if components.len() < 2 {
        return Err(Error::InvalidArgument("KL term needs at least two samples".into()));
    }
    let n = T::from_usize_lossy(components.len());
    let mean = components.iter().copied().sum::<T>() / n;
    let var = components.iter().map(|&c| (c - mean) * (c - mean)).sum::<T>() / n;
    Ok((mean, var))
}

/// `KL(N(μ, σ²) ‖ N(0, v)) = ½(σ²/v + μ²/v − 1 − ln(σ²/v))`; for `v = 1`
/// this is `−½(1 + ln σ² − μ² − σ²)`.
pub fn kld_from_moments<T: Scalar>(mean: T, variance: T, target_variance: T) -> Result<T> {
    if !(variance > T::zero()) {
        return Err(Error::Degenerate("zero-variance batch"));
    }
    let r = variance / target_variance;
    Ok(T::lit(0.5) * (r + mean * mean / target_variance - T::one() - r.ln()))
}

/// KL divergence of the pooled Gaussian fit of `components` from `N(0, 1)`.
pub fn loss_kld<T: Scalar>(components: &[T]) -> Result<T> {
    loss_kld_with_target(components, T::one())
}

pub fn loss_kld_with_target<T: Scalar>(components: &[T], target_variance: T) -> Result<T> {
    let (mean, var) = pooled_moments(components)?;
    kld_from_moments(mean, var, target_variance)
}

/// `∂KL/∂cᵢ = (μ/v)/N + (1/v − 1/σ²)(cᵢ − μ)/N`.
pub fn kld_grad<T: Scalar>(components: &[T], target_variance: T) -> Result<Vec<T>> {
    let (mean, var) = pooled_moments(components)?;
    if !(var > T::zero()) {
        return Err(Error::Degenerate("zero-variance batch"));
    }
    let n = T::from_usize_lossy(components.len());
    let d_mean = mean / target_variance / n;
    let d_spread = (target_variance.recip() - var.recip()) / n;
    Ok(components.iter().map(|&c| d_mean + d_spread * (c - mean)).collect())
}

/// Which samples share one `(μ, σ²)` pair in the KL term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlPooling {
    /// One pair over every real component in the batch. Under per-block
    /// power normalization the pooled variance is `0.5 − μ²`, so this form
    /// only constrains the pooled mean.
    Batch,
    /// One pair per component position across the batch; the KL values are
    /// averaged over positions.
    #[default]
    PerDimension,
}

/// KL value and its gradient w.r.t. every component of a block-major batch
/// (`width` components per block).
pub fn kl_term<T: Scalar>(
    components: &[T],
    width: usize,
    pooling: KlPooling,
    target_variance: T,
) -> Result<(T, Vec<T>)> {
    match pooling {
        KlPooling::Batch => {
            Ok((loss_kld_with_target(components, target_variance)?, kld_grad(components, target_variance)?))
        }
        KlPooling::PerDimension => {
            if width == 0 || !components.len().is_multiple_of(width) {
                return Err(Error::InvalidArgument(format!(
                    "{} components do not split into blocks of {width}",
                    components.len()
                )));
            }
            let scale = T::from_usize_lossy(width).recip();
            let mut value = T::zero();
            let mut grad = vec![T::zero(); components.len()];
            for j in 0..width {
                let column: Vec<T> = components.iter().skip(j).step_by(width).copied().collect();
                value = value + scale * loss_kld_with_target(&column, target_variance)?;
                for (b, g) in kld_grad(&column, target_variance)?.into_iter().enumerate() {
                    grad[b * width + j] = scale * g;
                }
            }
            Ok((value, grad))
        }
    }
}

/// `L_task + α · L_KL`.
pub fn loss_combined<T: Scalar>(task: T, kld: T, alpha: T) -> T {
    task + alpha * kld
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::grad_check_flat;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn per_dimension_kl_matches_column_oracle_and_fd() {
        // Two blocks of width 3, block-major.
        let c = [0.5, -1.0, 2.0, 1.5, 0.0, -2.0];
        let (v, g) = kl_term(&c, 3, KlPooling::PerDimension, 1.0).unwrap();
        let col = |j: usize| [c[j], c[3 + j]];
        let expect: f64 = (0..3).map(|j| loss_kld(&col(j)).unwrap()).sum::<f64>() / 3.0;
        assert_abs_diff_eq!(v, expect, epsilon = 1e-14);
        let err = grad_check_flat(&c, &g, |p| kl_term(p, 3, KlPooling::PerDimension, 1.0).unwrap().0, 1e-6);
        assert!(err < 1e-6, "{err}");
        let (vb, _) = kl_term(&c, 3, KlPooling::Batch, 1.0).unwrap();
        assert_abs_diff_eq!(vb, loss_kld(&c).unwrap(), epsilon = 1e-15);
        assert!(kl_term(&c, 4, KlPooling::PerDimension, 1.0).is_err());
        assert!(kl_term(&c[..3], 3, KlPooling::PerDimension, 1.0).is_err());
    }

    #[test]
    fn ce_values() {
        let s = [0.0, 1.0, 0.0, 0.0];
        assert_eq!(loss_ce(&s, &s).unwrap(), 0.0);
        let uniform = vec![1.0f64 / 16.0; 16];
        let mut t = vec![0.0; 16];
        t[3] = 1.0;
        assert_abs_diff_eq!(loss_ce(&t, &uniform).unwrap(), 16f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(loss_ce(&t, &uniform).unwrap(), 2.772589, epsilon = 1e-6);
        let mut p = vec![0.1; 16];
        p[3] = 1e-20;
        assert_abs_diff_eq!(loss_ce(&t, &p).unwrap(), 27.631021, epsilon = 1e-6);
        assert!(loss_ce(&t, &p[..3]).is_err());
    }

    #[test]
    fn bce_values() {
        let t = [1.0, 0.0, 1.0];
        assert_abs_diff_eq!(loss_bce(&t, &t).unwrap(), 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(loss_bce(&t, &[0.5; 3]).unwrap(), 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(loss_bce(&[1.0], &[0.25]).unwrap(), 1.386294, epsilon = 1e-6);
    }

    #[test]
    fn kld_closed_forms() {
        assert_eq!(kld_from_moments(0.0f64, 1.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(kld_from_moments(1.0f64, 1.0, 1.0).unwrap(), 0.5, epsilon = 1e-15);
        let want = -0.5 * (1.0 + 0.5f64.ln() - 0.5);
        assert_abs_diff_eq!(kld_from_moments(0.0f64, 0.5, 1.0).unwrap(), want, epsilon = 1e-15);
        assert_abs_diff_eq!(want, 0.096574, epsilon = 1e-6);
        assert_eq!(kld_from_moments(0.0f64, 0.5, 0.5).unwrap(), 0.0);
        assert!(matches!(kld_from_moments(0.0f64, 0.0, 1.0), Err(Error::Degenerate(_))));
        assert!(loss_kld(&[1.0f64]).is_err());
        assert!(loss_kld(&[0.3f64, 0.3, 0.3]).is_err());
    }

    #[test]
    fn pooled_kld_of_symmetric_unit_samples_is_zero() {
        assert_abs_diff_eq!(loss_kld(&[1.0f64, -1.0, 1.0, -1.0]).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn combined_loss() {
        assert_eq!(loss_combined(2.0, 0.5, 0.0), 2.0);
        assert_abs_diff_eq!(loss_combined(2.0, 0.5, 0.1), 2.05, epsilon = 1e-15);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let c = vec![0.3, -0.8, 1.4, 0.2, -0.1, 0.9, 0.55];
        for v in [1.0, 0.5] {
            let g = kld_grad(&c, v).unwrap();
            assert!(grad_check_flat(&c, &g, |x| loss_kld_with_target(x, v).unwrap(), 1e-6) < 1e-6);
        }
        let p = vec![0.2, 0.7, 0.9, 0.01];
        let t = vec![1.0, 0.0, 1.0, 0.0];
        assert!(grad_check_flat(&p, &bce_grad(&t, &p), |x| loss_bce(&t, x).unwrap(), 1e-7) < 1e-6);
        let onehot = vec![0.0, 1.0, 0.0, 0.0];
        assert!(grad_check_flat(&p, &ce_grad(1, &p), |x| loss_ce(&onehot, x).unwrap(), 1e-7) < 1e-6);
    }

    proptest! {
        #[test]
        fn kld_is_non_negative_and_zero_only_at_target(
            c in prop::collection::vec(-3.0f64..3.0, 2..64),
        ) {
            if let Ok(k) = loss_kld(&c) {
                prop_assert!(k >= -1e-15);
                let (m, v) = pooled_moments(&c).unwrap();
                if k < 1e-12 {
                    prop_assert!(m.abs() < 1e-5 && (v - 1.0).abs() < 1e-5);
                }
            }
        }
    }
}
