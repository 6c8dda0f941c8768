//! JSON model schema:
//!
//! ```json
//! {"layers": [{"rows": 16, "cols": 16, "activation": "relu",
//!              "weights": [/* rows*cols, row-major */], "biases": [/* rows */]}]}
//! ```
//!
//! Values are written as `f64` with shortest round-trip formatting, so an
//! `f64` network survives save/load bit for bit.

use serde::{Deserialize, Serialize};

use super::{Activation, DenseLayer, DenseNet};
use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerRecord {
    pub rows: usize,
    pub cols: usize,
    pub activation: Activation,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetRecord {
    pub layers: Vec<LayerRecord>,
}

impl<T: Scalar> From<&DenseNet<T>> for NetRecord {
    fn from(net: &DenseNet<T>) -> Self {
        NetRecord {
            layers: net
                .layers()
                .iter()
                .map(|l| LayerRecord {
                    rows: l.rows(),
                    cols: l.cols(),
                    activation: l.activation(),
                    weights: l.weights().iter().map(|w| w.as_f64()).collect(),
                    biases: l.biases().iter().map(|b| b.as_f64()).collect(),
                })
                .collect(),
        }
    }
}

impl NetRecord {
    pub fn into_net<T: Scalar>(self) -> Result<DenseNet<T>> {
        if self.layers.is_empty() {
            return Err(Error::Format("model has no layers".into()));
        }
        let layers = self
            .layers
            .into_iter()
            .map(|r| {
                if r.weights.iter().chain(&r.biases).any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("model parameters"));
                }
                DenseLayer::new(
                    r.rows,
                    r.cols,
                    r.weights.into_iter().map(T::lit).collect(),
                    r.biases.into_iter().map(T::lit).collect(),
                    r.activation,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        DenseNet::new(layers)
    }
}

pub fn to_json<T: Scalar>(net: &DenseNet<T>) -> Result<String> {
    Ok(serde_json::to_string(&NetRecord::from(net))?)
}

pub fn from_json<T: Scalar>(text: &str) -> Result<DenseNet<T>> {
    serde_json::from_str::<NetRecord>(text)?.into_net()
}
