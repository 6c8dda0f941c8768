use super::{DenseNet, NetGrads};
use crate::error::{check_dim, Result};
use crate::Scalar;

/// Bias-corrected Adam over a flat parameter vector.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState<T> {
    pub step_count: u64,
    pub first_moment: Vec<T>,
    pub second_moment: Vec<T>,
    pub learning_rate: T,
    pub beta1: T,
    pub beta2: T,
    pub epsilon: T,
}

impl<T: Scalar> AdamState<T> {
    /// Zeroed moments for `param_count` parameters, β₁ = 0.9, β₂ = 0.999, ε = 1e-8.
    pub fn new(param_count: usize, learning_rate: T) -> Self {
        Self {
            step_count: 0,
            first_moment: vec![T::zero(); param_count],
            second_moment: vec![T::zero(); param_count],
            learning_rate,
            beta1: T::lit(0.9),
            beta2: T::lit(0.999),
            epsilon: T::lit(1e-8),
        }
    }

    pub fn for_net(net: &DenseNet<T>, learning_rate: T) -> Self {
        Self::new(net.param_count(), learning_rate)
    }

    /// One update of `params` in place.
    pub fn step(&mut self, params: &mut [T], grads: &[T]) -> Result<()> {
        check_dim("adam parameters", self.first_moment.len(), params.len())?;
        check_dim("adam gradients", params.len(), grads.len())?;
        let (c1, c2) = self.advance();
        self.apply(0, params, grads, c1, c2);
        Ok(())
    }

    /// One update of every parameter of `net`.
    pub fn step_net(&mut self, net: &mut DenseNet<T>, grads: &NetGrads<T>) -> Result<()> {
        check_dim("adam parameters", self.first_moment.len(), net.param_count())?;
        let grad_slices: Vec<&[T]> = grads.slices().collect();
        let mut params = net.param_slices_mut();
        check_dim("adam gradient blocks", params.len(), grad_slices.len())?;
        for (p, g) in params.iter().zip(&grad_slices) {
            check_dim("adam gradient block", p.len(), g.len())?;
        }
        let (c1, c2) = self.advance();
        let mut offset = 0;
        for (p, g) in params.iter_mut().zip(grad_slices) {
            self.apply(offset, p, g, c1, c2);
            offset += p.len();
        }
        Ok(())
    }

    fn advance(&mut self) -> (T, T) {
        self.step_count += 1;
        let t = self.step_count as i32;
        (T::one() - self.beta1.powi(t), T::one() - self.beta2.powi(t))
    }

    fn apply(&mut self, offset: usize, params: &mut [T], grads: &[T], c1: T, c2: T) {
        let m = &mut self.first_moment[offset..offset + params.len()];
        let v = &mut self.second_moment[offset..offset + params.len()];
        for i in 0..params.len() {
            let g = grads[i];
            m[i] = self.beta1 * m[i] + (T::one() - self.beta1) * g;
            v[i] = self.beta2 * v[i] + (T::one() - self.beta2) * g * g;
            let m_hat = m[i] / c1;
            let v_hat = v[i] / c2;
            params[i] = params[i] - self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
        }
    }
}
