use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::power::{normalize_power, TxSignal};
use crate::channel::interleave;
use crate::ecc::{self, CodecKind};
use crate::error::{check_dim, Error, Result};
use crate::nn::{Activation, DenseLayer, DenseNet};
use crate::{rng, Scalar};

/// Hard cap on `k` for one-hot transceivers (input width `2^k`).
pub const ONE_HOT_MAX_K: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Message index as a length-`2^k` indicator, softmax receiver.
    #[serde(rename = "onehot")]
    OneHot,
    /// Raw `k` bits in, per-bit sigmoid out.
    #[serde(rename = "binary_direct")]
    BinaryDirect,
    /// ECC-encoded `k2` bits in, per-bit sigmoid out, classical decode after.
    #[serde(rename = "binary_coded")]
    BinaryCoded,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::OneHot => "onehot",
            Mode::BinaryDirect => "binary_direct",
            Mode::BinaryCoded => "binary_coded",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `depth` layers on both sides.
    #[default]
    Standard,
    /// Receiver has one layer fewer than the transmitter.
    LeanReceiver,
}

/// A source word (`k` bits) or its coded form (`k2` bits), most significant
/// bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MessageBlock {
    bits: Vec<u8>,
}

impl MessageBlock {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("message bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn from_index(index: usize, k: usize) -> Result<Self> {
        if k >= usize::BITS as usize || index >> k != 0 {
            return Err(Error::InvalidArgument(format!("index {index} out of range for k = {k}")));
        }
        Ok(Self { bits: ecc::to_bits(index, k) })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Binary value of the bits.
    pub fn index(&self) -> usize {
        ecc::from_bits(&self.bits)
    }
}

/// Architecture request for [`build_ae`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AeShape {
    pub mode: Mode,
    pub k: usize,
    /// Coded width; must equal the codec's `k2` in coded mode, ignored otherwise.
    pub k2: Option<usize>,
    pub n: usize,
    pub depth: usize,
    pub hidden_width: usize,
    pub codec: Option<CodecKind>,
    #[serde(default)]
    pub variant: Variant,
}

impl AeShape {
    /// `2^k` for one-hot and direct modes, 128 for coded mode.
    pub fn default_hidden_width(mode: Mode, k: usize) -> usize {
        match mode {
            Mode::BinaryCoded => 128,
            _ => 1 << k.min(ONE_HOT_MAX_K),
        }
    }

    pub fn new(mode: Mode, k: usize, n: usize, depth: usize) -> Self {
        Self {
            mode,
            k,
            k2: None,
            n,
            depth,
            hidden_width: Self::default_hidden_width(mode, k),
            codec: None,
            variant: Variant::Standard,
        }
    }

    pub fn coded(codec: CodecKind, n: usize, depth: usize) -> Self {
        let c = codec.codec();
        Self {
            mode: Mode::BinaryCoded,
            k: c.k(),
            k2: Some(c.k2()),
            n,
            depth,
            hidden_width: Self::default_hidden_width(Mode::BinaryCoded, c.k()),
            codec: Some(codec),
            variant: Variant::Standard,
        }
    }

    pub fn with_hidden_width(mut self, width: usize) -> Self {
        self.hidden_width = width;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }
}

/// Transmitter/receiver pair plus the bookkeeping needed to feed it.
#[derive(Clone, Debug, PartialEq)]
pub struct AeSystem<T> {
    pub mode: Mode,
    pub variant: Variant,
    pub k: usize,
    pub k2: Option<usize>,
    pub n: usize,
    pub codec: Option<CodecKind>,
    pub transmitter: DenseNet<T>,
    pub receiver: DenseNet<T>,
}

/// Receiver decision with its confidence (max class probability for one-hot,
/// least certain bit's `max(p, 1−p)` for binary modes).
#[derive(Clone, Debug, PartialEq)]
pub struct Reception<T> {
    pub block: MessageBlock,
    pub confidence: T,
}

fn validate_shape(shape: &AeShape) -> Result<usize> {
    if shape.n < 2 || !shape.n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n must be even and >= 2, got {}", shape.n)));
    }
    if shape.depth < 2 {
        return Err(Error::InvalidArgument(format!("depth must be >= 2, got {}", shape.depth)));
    }
    if shape.k == 0 || shape.hidden_width == 0 {
        return Err(Error::InvalidArgument("k and hidden_width must be positive".into()));
    }
    Ok(match shape.mode {
        Mode::OneHot => {
            if shape.k > ONE_HOT_MAX_K {
                return Err(Error::InvalidArgument(format!(
                    "one-hot mode supports k <= {ONE_HOT_MAX_K}, got {}",
                    shape.k
                )));
            }
            1 << shape.k
        }
        Mode::BinaryDirect => shape.k,
        Mode::BinaryCoded => {
            let codec =
                shape.codec.ok_or_else(|| Error::InvalidArgument("coded mode requires a codec".into()))?.codec();
            if codec.k() != shape.k {
                return Err(Error::InvalidArgument(format!(
                    "codec {} takes k = {}, got {}",
                    codec.name(),
                    codec.k(),
                    shape.k
                )));
            }
            if let Some(k2) = shape.k2 {
                if k2 != codec.k2() {
                    return Err(Error::InvalidArgument(format!(
                        "codec {} produces k2 = {}, got {k2}",
                        codec.name(),
                        codec.k2()
                    )));
                }
            }
            codec.k2()
        }
    })
}

fn stack<T: Scalar>(
    input: usize,
    hidden: usize,
    hidden_layers: usize,
    output: usize,
    out_act: Activation,
    rng: &mut rng::SimRng,
) -> Result<DenseNet<T>> {
    let mut layers = Vec::with_capacity(hidden_layers + 1);
    let mut width = input;
    for _ in 0..hidden_layers {
        layers.push(DenseLayer::glorot(hidden, width, Activation::Relu, rng));
        width = hidden;
    }
    layers.push(DenseLayer::glorot(output, width, out_act, rng));
    DenseNet::new(layers)
}

/// Builds a freshly initialized transceiver (Glorot-uniform weights seeded by
/// `seed`, zero biases, ReLU hidden layers).
///
/// The transmitter is `depth − 1` hidden layers then a linear layer to `n`
/// reals; the receiver mirrors it with a softmax (one-hot) or sigmoid (binary)
/// output, one hidden layer fewer for [`Variant::LeanReceiver`].
pub fn build_ae<T: Scalar>(shape: &AeShape, seed: u64) -> Result<AeSystem<T>> {
    let width = validate_shape(shape)?;
    let mut r = rng::derive(seed, &[rng::tag::INIT]);
    let transmitter = stack(width, shape.hidden_width, shape.depth - 1, shape.n, Activation::Linear, &mut r)?;
    let out_act = match shape.mode {
        Mode::OneHot => Activation::Softmax,
        _ => Activation::Sigmoid,
    };
    let rx_hidden = match shape.variant {
        Variant::Standard => shape.depth - 1,
        Variant::LeanReceiver => shape.depth - 2,
    };
    let receiver = stack(shape.n, shape.hidden_width, rx_hidden, width, out_act, &mut r)?;
    Ok(AeSystem {
        mode: shape.mode,
        variant: shape.variant,
        k: shape.k,
        k2: (shape.mode == Mode::BinaryCoded).then_some(width),
        n: shape.n,
        codec: shape.codec.filter(|_| shape.mode == Mode::BinaryCoded),
        transmitter,
        receiver,
    })
}

impl<T: Scalar> AeSystem<T> {
    /// Width of the transmitter input / receiver output.
    pub fn io_width(&self) -> usize {
        self.transmitter.input_dim()
    }

    /// Bits per block the transmitter consumes (`k`, or `k2` when coded).
    pub fn block_bits(&self) -> usize {
        match self.mode {
            Mode::BinaryCoded => self.k2.unwrap_or(self.k),
            _ => self.k,
        }
    }

    pub fn symbols_per_block(&self) -> usize {
        self.n / 2
    }

    /// Number of distinct source messages, `2^k`.
    pub fn message_count(&self) -> usize {
        1usize << self.k
    }

    fn check_block(&self, m: &MessageBlock) -> Result<()> {
        check_dim("message block bits", self.block_bits(), m.len())
    }

    /// Network input for `m`.
    /// Transmitter input: one-hot vector, or bits mapped 0 -> +1, 1 -> -1.
    pub fn encode_input(&self, m: &MessageBlock) -> Result<Vec<T>> {
        self.check_block(m)?;
        Ok(match self.mode {
            Mode::OneHot => self.target(m),
            _ => m.bits().iter().map(|&b| if b == 1 { -T::one() } else { T::one() }).collect(),
        })
    }

    /// Receiver target: one-hot vector or the 0/1 bits.
    pub fn encode_target(&self, m: &MessageBlock) -> Result<Vec<T>> {
        self.check_block(m)?;
        Ok(self.target(m))
    }

    fn target(&self, m: &MessageBlock) -> Vec<T> {
        match self.mode {
            Mode::OneHot => {
                let mut v = vec![T::zero(); self.io_width()];
                v[m.index()] = T::one();
                v
            }
            _ => m.bits().iter().map(|&b| if b == 1 { T::one() } else { T::zero() }).collect(),
        }
    }

    /// Source bits to the block the transmitter consumes (ECC-encoded in
    /// coded mode).
    pub fn source_to_block(&self, source: &[u8]) -> Result<MessageBlock> {
        check_dim("source bits", self.k, source.len())?;
        match self.codec {
            Some(c) if self.mode == Mode::BinaryCoded => MessageBlock::from_bits(c.codec().encode(source)?),
            _ => MessageBlock::from_bits(source.to_vec()),
        }
    }

    /// Receiver block back to source bits (classically decoded in coded mode).
    pub fn block_to_source(&self, block: &MessageBlock) -> Result<Vec<u8>> {
        self.check_block(block)?;
        match self.codec {
            Some(c) if self.mode == Mode::BinaryCoded => Ok(c.codec().decode(block.bits())?.bits),
            _ => Ok(block.bits().to_vec()),
        }
    }

    pub fn transmit(&self, m: &MessageBlock) -> Result<TxSignal<T>> {
        let input = self.encode_input(m)?;
        normalize_power(&self.transmitter.predict(&input)?)
    }

    /// One-hot shortcut: transmit message `index`.
    pub fn transmit_index(&self, index: usize) -> Result<TxSignal<T>> {
        self.transmit(&MessageBlock::from_index(index, self.block_bits())?)
    }

    /// Decide on a received block. One-hot ties go to the lowest index; a bit
    /// is one only if its probability exceeds one half.
    pub fn receive(&self, y: &[Complex<T>]) -> Result<Reception<T>> {
        check_dim("received symbols", self.symbols_per_block(), y.len())?;
        let p = self.receiver.predict(&interleave(y))?;
        self.decide(&p)
    }

    pub fn decide(&self, p: &[T]) -> Result<Reception<T>> {
        check_dim("receiver output", self.io_width(), p.len())?;
        match self.mode {
            Mode::OneHot => {
                let best = (0..p.len()).fold(0, |b, i| if p[i] > p[b] { i } else { b });
                Ok(Reception { block: MessageBlock::from_index(best, self.k)?, confidence: p[best] })
            }
            _ => {
                let half = T::lit(0.5);
                let bits = p.iter().map(|&v| u8::from(v > half)).collect();
                let confidence = p.iter().map(|&v| v.max(T::one() - v)).fold(T::one(), T::min);
                Ok(Reception { block: MessageBlock::from_bits(bits)?, confidence })
            }
        }
    }

    pub fn param_count(&self) -> usize {
        self.transmitter.param_count() + self.receiver.param_count()
    }

    /// Transmitter parameters followed by receiver parameters.
    pub fn params_flat(&self) -> Vec<T> {
        let mut p = self.transmitter.params_flat();
        p.extend(self.receiver.params_flat());
        p
    }

    pub fn set_params_flat(&mut self, params: &[T]) -> Result<()> {
        check_dim("system parameters", self.param_count(), params.len())?;
        let split = self.transmitter.param_count();
        self.transmitter.set_params_flat(&params[..split])?;
        self.receiver.set_params_flat(&params[split..])
    }
}
