//! Featureless autoencoder links.
//!
//! Small dense autoencoders that map message blocks to noise-like complex
//! baseband signals, trained end to end through AWGN or Rayleigh block-fading
//! channels with a cross-entropy objective optionally regularized by a
//! Gaussian KL term. The crate also carries the classical codecs used for the
//! coded binary-input transceiver (shortened BCH, Reed-Solomon over GF(8),
//! (7,5) convolutional with Viterbi) and the evaluation toolkit
//! (autocorrelation, BLER waterfalls, Gaussianity statistics, QPSK/DSSS
//! reference signals).
//!
//! All numeric code is generic over [`Scalar`]; the `*64` aliases at the crate
//! root fix it to `f64`, which is what the training and gradient checks are
//! calibrated for.

// `!(x > 0)` is the NaN-rejecting form used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod ecc;
pub mod error;
pub mod link;
pub mod nn;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type DenseLayer64 = nn::DenseLayer<f64>;
pub type DenseNet64 = nn::DenseNet<f64>;
pub type AdamState64 = nn::AdamState<f64>;
pub type ChannelSpec64 = channel::ChannelSpec<f64>;
pub type AeSystem64 = link::AeSystem<f64>;
pub type TxSignal64 = link::TxSignal<f64>;
pub type TrainConfig64 = link::TrainConfig<f64>;
pub type Complex64 = Complex<f64>;
