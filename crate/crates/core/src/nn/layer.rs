use rand::Rng;

use super::Activation;
use crate::error::{check_dim, Result};
use crate::Scalar;

/// Fully connected layer `y = act(W x + b)` with `W` stored row-major
/// (`rows` = outputs, `cols` = inputs).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseLayer<T> {
    rows: usize,
    cols: usize,
    weights: Vec<T>,
    biases: Vec<T>,
    activation: Activation,
}

impl<T: Scalar> DenseLayer<T> {
    pub fn new(rows: usize, cols: usize, weights: Vec<T>, biases: Vec<T>, activation: Activation) -> Result<Self> {
        check_dim("layer weights", rows * cols, weights.len())?;
        check_dim("layer biases", rows, biases.len())?;
        Ok(Self { rows, cols, weights, biases, activation })
    }

    pub fn zeros(rows: usize, cols: usize, activation: Activation) -> Self {
        Self { rows, cols, weights: vec![T::zero(); rows * cols], biases: vec![T::zero(); rows], activation }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn glorot<R: Rng + ?Sized>(rows: usize, cols: usize, activation: Activation, rng: &mut R) -> Self {
        let limit = (6.0 / (rows + cols) as f64).sqrt();
        let weights = (0..rows * cols).map(|_| T::lit(rng.random_range(-limit..limit))).collect();
        Self { rows, cols, weights, biases: vec![T::zero(); rows], activation }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn biases(&self) -> &[T] {
        &self.biases
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn param_count(&self) -> usize {
        self.weights.len() + self.biases.len()
    }

    pub(crate) fn params_mut(&mut self) -> (&mut [T], &mut [T]) {
        (&mut self.weights, &mut self.biases)
    }

    pub(crate) fn pre_activation(&self, x: &[T]) -> Vec<T> {
        self.weights
            .chunks_exact(self.cols)
            .zip(&self.biases)
            .map(|(row, &b)| row.iter().zip(x).fold(b, |acc, (&w, &xi)| acc + w * xi))
            .collect()
    }

    pub(crate) fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        self.activation.apply(self.pre_activation(x))
    }
}
