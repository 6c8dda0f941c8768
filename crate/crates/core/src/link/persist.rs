//! Saved transceivers: the two network records plus a header describing how
//! the system was built and trained.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::system::{AeSystem, Mode, Variant};
use crate::channel::ChannelSpec;
use crate::ecc::CodecKind;
use crate::error::{Error, Result};
use crate::nn::serial::NetRecord;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemHeader {
    pub mode: Mode,
    #[serde(default)]
    pub variant: Variant,
    pub k: usize,
    pub k2: Option<usize>,
    pub n: usize,
    pub codec: Option<CodecKind>,
    pub alpha: f64,
    pub channel: ChannelSpec<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SavedSystem {
    pub header: SystemHeader,
    pub transmitter: NetRecord,
    pub receiver: NetRecord,
}

impl SavedSystem {
    pub fn capture<T: Scalar>(system: &AeSystem<T>, alpha: f64, channel: ChannelSpec<f64>, seed: u64) -> Self {
        Self {
            header: SystemHeader {
                mode: system.mode,
                variant: system.variant,
                k: system.k,
                k2: system.k2,
                n: system.n,
                codec: system.codec,
                alpha,
                channel,
                seed,
            },
            transmitter: NetRecord::from(&system.transmitter),
            receiver: NetRecord::from(&system.receiver),
        }
    }

    pub fn into_system<T: Scalar>(self) -> Result<AeSystem<T>> {
        let h = self.header;
        let transmitter = self.transmitter.into_net::<T>()?;
        let receiver = self.receiver.into_net::<T>()?;
        if transmitter.output_dim() != h.n || receiver.input_dim() != h.n {
            return Err(Error::Format(format!("networks do not match n = {}", h.n)));
        }
        if transmitter.input_dim() != receiver.output_dim() {
            return Err(Error::Format("transmitter input and receiver output widths differ".into()));
        }
        let width = match h.mode {
            Mode::OneHot => 1usize.checked_shl(h.k as u32).unwrap_or(0),
            Mode::BinaryDirect => h.k,
            Mode::BinaryCoded => h.k2.unwrap_or(0),
        };
        if transmitter.input_dim() != width {
            return Err(Error::Format(format!("network width {} does not match header", transmitter.input_dim())));
        }
        if h.mode == Mode::BinaryCoded && h.codec.is_none() {
            return Err(Error::Format("coded system without codec".into()));
        }
        Ok(AeSystem {
            mode: h.mode,
            variant: h.variant,
            k: h.k,
            k2: h.k2,
            n: h.n,
            codec: h.codec,
            transmitter,
            receiver,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
