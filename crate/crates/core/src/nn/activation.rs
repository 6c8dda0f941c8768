use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Linear,
    Relu,
    Softmax,
    Sigmoid,
}

/// Numerically stable softmax (max subtracted before exponentiation).
pub fn softmax<T: Scalar>(z: &[T]) -> Result<Vec<T>> {
    if z.is_empty() {
        return Err(Error::InvalidArgument("softmax of an empty vector".into()));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("softmax input"));
    }
    let max = z.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = z.iter().map(|&v| (v - max).exp()).collect();
    let total: T = exps.iter().copied().sum();
    Ok(exps.into_iter().map(|e| e / total).collect())
}

#[inline]
pub fn sigmoid<T: Scalar>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

impl Activation {
    pub(crate) fn apply<T: Scalar>(self, z: Vec<T>) -> Result<Vec<T>> {
        Ok(match self {
            Activation::Linear => z,
            Activation::Relu => z.into_iter().map(|v| v.max(T::zero())).collect(),
            Activation::Sigmoid => z.into_iter().map(sigmoid).collect(),
            Activation::Softmax => softmax(&z)?,
        })
    }

    /// Pull `grad` (w.r.t. the activation output `out`) back to the
    /// pre-activation.
    pub(crate) fn pullback<T: Scalar>(self, out: &[T], grad: &[T]) -> Vec<T> {
        match self {
            Activation::Linear => grad.to_vec(),
            Activation::Relu => {
                out.iter().zip(grad).map(|(&a, &g)| if a > T::zero() { g } else { T::zero() }).collect()
            }
            Activation::Sigmoid => out.iter().zip(grad).map(|(&a, &g)| g * a * (T::one() - a)).collect(),
            Activation::Softmax => {
                let dot: T = out.iter().zip(grad).map(|(&a, &g)| a * g).sum();
                out.iter().zip(grad).map(|(&a, &g)| a * (g - dot)).collect()
            }
        }
    }
}
