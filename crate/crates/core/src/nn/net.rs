use std::sync::atomic::{AtomicU64, Ordering};

use super::DenseLayer;
use crate::error::{check_dim, Error, Result};
use crate::Scalar;

static NEXT_NET_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_NET_ID.fetch_add(1, Ordering::Relaxed)
}

/// Ordered stack of dense layers.
///
/// Every instance (including clones) carries a unique identity and a revision
/// counter bumped on each parameter mutation, so a [`ForwardCache`] can only be
/// consumed by the exact parameter state that produced it.
#[derive(Debug)]
pub struct DenseNet<T> {
    input_dim: usize,
    layers: Vec<DenseLayer<T>>,
    id: u64,
    revision: u64,
}

/// Per-layer activations recorded by [`DenseNet::forward`]; `activations[0]`
/// is the input and `activations[i + 1]` the output of layer `i`.
#[derive(Clone, Debug)]
pub struct ForwardCache<T> {
    net_id: u64,
    revision: u64,
    activations: Vec<Vec<T>>,
}

impl<T> ForwardCache<T> {
    pub fn output(&self) -> &[T] {
        self.activations.last().expect("cache holds at least the input")
    }

    pub fn activations(&self) -> &[Vec<T>] {
        &self.activations
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerGrads<T> {
    pub weights: Vec<T>,
    pub biases: Vec<T>,
}

/// Gradients shaped like the parameters of one [`DenseNet`].
#[derive(Clone, Debug, PartialEq)]
pub struct NetGrads<T> {
    pub layers: Vec<LayerGrads<T>>,
}

impl<T: Scalar> NetGrads<T> {
    pub fn zeros_like(net: &DenseNet<T>) -> Self {
        Self {
            layers: net
                .layers
                .iter()
                .map(|l| LayerGrads {
                    weights: vec![T::zero(); l.weights().len()],
                    biases: vec![T::zero(); l.biases().len()],
                })
                .collect(),
        }
    }

    /// Flattened in parameter order (layer by layer, weights then biases).
    pub fn flat(&self) -> Vec<T> {
        self.slices().flat_map(|s| s.iter().copied()).collect()
    }

    pub fn slices(&self) -> impl Iterator<Item = &[T]> {
        self.layers.iter().flat_map(|l| [l.weights.as_slice(), l.biases.as_slice()])
    }

    pub fn scale(&mut self, factor: T) {
        for l in &mut self.layers {
            l.weights.iter_mut().chain(l.biases.iter_mut()).for_each(|g| *g = *g * factor);
        }
    }

    pub fn max_abs(&self) -> T {
        self.slices().flat_map(|s| s.iter()).fold(T::zero(), |m, g| m.max(g.abs()))
    }
}

impl<T: Clone> Clone for DenseNet<T> {
    fn clone(&self) -> Self {
        Self { input_dim: self.input_dim, layers: self.layers.clone(), id: fresh_id(), revision: 0 }
    }
}

impl<T: PartialEq> PartialEq for DenseNet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.input_dim == other.input_dim && self.layers == other.layers
    }
}

impl<T: Scalar> DenseNet<T> {
    /// Chains `layers`; each layer's input width must equal the previous
    /// layer's output width.
    pub fn new(layers: Vec<DenseLayer<T>>) -> Result<Self> {
        let first = layers.first().ok_or_else(|| Error::InvalidArgument("network needs at least one layer".into()))?;
        let input_dim = first.cols();
        for pair in layers.windows(2) {
            check_dim("layer chaining", pair[0].rows(), pair[1].cols())?;
        }
        Ok(Self { input_dim, layers, id: fresh_id(), revision: 0 })
    }

    /// Parameter-free pass-through of width `dim`.
    pub fn identity(dim: usize) -> Self {
        Self { input_dim: dim, layers: Vec::new(), id: fresh_id(), revision: 0 }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, DenseLayer::rows)
    }

    pub fn layers(&self) -> &[DenseLayer<T>] {
        &self.layers
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(DenseLayer::param_count).sum()
    }

    pub fn forward(&self, input: &[T]) -> Result<(Vec<T>, ForwardCache<T>)> {
        check_dim("network input", self.input_dim, input.len())?;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(input.to_vec());
        for layer in &self.layers {
            let next = layer.forward(activations.last().unwrap())?;
            activations.push(next);
        }
        let output = activations.last().unwrap().clone();
        Ok((output, ForwardCache { net_id: self.id, revision: self.revision, activations }))
    }

    /// Forward pass without keeping the cache.
    pub fn predict(&self, input: &[T]) -> Result<Vec<T>> {
        check_dim("network input", self.input_dim, input.len())?;
        let mut x = input.to_vec();
        for layer in &self.layers {
            x = layer.forward(&x)?;
        }
        Ok(x)
    }

    /// Reverse pass: returns parameter gradients and the gradient w.r.t. the
    /// network input.
    pub fn backward(&self, cache: &ForwardCache<T>, output_grad: &[T]) -> Result<(NetGrads<T>, Vec<T>)> {
        let mut grads = NetGrads::zeros_like(self);
        let input_grad = self.backward_into(cache, output_grad, &mut grads)?;
        Ok((grads, input_grad))
    }

    /// Like [`backward`](Self::backward) but accumulates into `grads`.
    pub fn backward_into(&self, cache: &ForwardCache<T>, output_grad: &[T], grads: &mut NetGrads<T>) -> Result<Vec<T>> {
        if cache.net_id != self.id
            || cache.revision != self.revision
            || cache.activations.len() != self.layers.len() + 1
        {
            return Err(Error::StaleCache);
        }
        check_dim("output gradient", self.output_dim(), output_grad.len())?;
        check_dim("gradient buffer", self.layers.len(), grads.layers.len())?;

        let mut upstream = output_grad.to_vec();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let input = &cache.activations[i];
            let output = &cache.activations[i + 1];
            let delta = layer.activation().pullback(output, &upstream);
            let g = &mut grads.layers[i];
            check_dim("gradient buffer", layer.weights().len(), g.weights.len())?;
            let cols = layer.cols();
            for (r, &d) in delta.iter().enumerate() {
                g.biases[r] = g.biases[r] + d;
                if d != T::zero() {
                    let row = &mut g.weights[r * cols..(r + 1) * cols];
                    for (gw, &x) in row.iter_mut().zip(input) {
                        *gw = *gw + d * x;
                    }
                }
            }
            let mut next = vec![T::zero(); cols];
            for (row, &d) in layer.weights().chunks_exact(cols).zip(&delta) {
                if d != T::zero() {
                    for (n, &w) in next.iter_mut().zip(row) {
                        *n = *n + w * d;
                    }
                }
            }
            upstream = next;
        }
        Ok(upstream)
    }

    /// All parameters in gradient order (layer by layer, weights then biases).
    pub fn params_flat(&self) -> Vec<T> {
        self.layers.iter().flat_map(|l| l.weights().iter().chain(l.biases()).copied()).collect()
    }

    pub fn set_params_flat(&mut self, params: &[T]) -> Result<()> {
        check_dim("flat parameters", self.param_count(), params.len())?;
        let mut offset = 0;
        for s in self.param_slices_mut() {
            let len = s.len();
            s.copy_from_slice(&params[offset..offset + len]);
            offset += len;
        }
        Ok(())
    }

    /// Mutable parameter slices in gradient order. Invalidates existing caches.
    pub fn param_slices_mut(&mut self) -> Vec<&mut [T]> {
        self.revision += 1;
        self.layers
            .iter_mut()
            .flat_map(|l| {
                let (w, b) = l.params_mut();
                [w, b]
            })
            .collect()
    }
}
