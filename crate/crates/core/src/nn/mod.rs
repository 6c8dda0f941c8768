//! Minimal dense-network engine: forward pass, reverse-mode gradients, Adam,
//! and a finite-difference gradient checker.

mod activation;
mod adam;
mod gradcheck;
mod layer;
mod net;
pub mod serial;

pub use activation::{sigmoid, softmax, Activation};
pub use adam::AdamState;
pub use gradcheck::{grad_check, grad_check_flat, relative_error, DEFAULT_EPS, RELATIVE_FLOOR};
pub use layer::DenseLayer;
pub use net::{DenseNet, ForwardCache, LayerGrads, NetGrads};
