use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::loss::{bce_grad, ce_grad, kl_term, loss_bce, loss_combined, pooled_moments, KlPooling, LOG_FLOOR};
use super::power::{normalize_power, normalize_power_pullback};
use super::system::{AeSystem, MessageBlock, Mode};
use crate::channel::{
    apply_with, deinterleave, draw_noise, interleave, pullback, ChannelKind, ChannelSpec, FadingDraw,
};
use crate::error::{Error, Result};
use crate::nn::{AdamState, ForwardCache, NetGrads};
use crate::{rng, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<T> {
    pub learning_rate: T,
    pub ebno_train_db: T,
    /// Weight of the KL term; zero trains on the task loss alone.
    pub alpha: T,
    /// Variance of the Gaussian the KL term pulls towards.
    pub kl_target_variance: T,
    #[serde(default)]
    pub kl_pooling: KlPooling,
    pub epochs: usize,
    pub batch_size: usize,
    pub train_set_size: usize,
    pub seed: u64,
}

impl<T: Scalar> Default for TrainConfig<T> {
    fn default() -> Self {
        Self {
            learning_rate: T::lit(0.001),
            ebno_train_db: T::zero(),
            alpha: T::lit(0.1),
            kl_target_variance: T::one(),
            kl_pooling: KlPooling::default(),
            epochs: 150,
            batch_size: 256,
            train_set_size: 1000,
            seed: 0,
        }
    }
}

impl<T: Scalar> TrainConfig<T> {
    pub fn objective(&self) -> Objective<T> {
        Objective { alpha: self.alpha, kl_target_variance: self.kl_target_variance, kl_pooling: self.kl_pooling }
    }
}

/// Loss composition: task loss plus `alpha` times the KL term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Objective<T> {
    pub alpha: T,
    pub kl_target_variance: T,
    pub kl_pooling: KlPooling,
}

impl<T: Scalar> Objective<T> {
    pub fn task_only() -> Self {
        Self::with_alpha(T::zero())
    }

    /// Default-pooled KL against `N(0, 1)`.
    pub fn with_alpha(alpha: T) -> Self {
        Self { alpha, kl_target_variance: T::one(), kl_pooling: KlPooling::default() }
    }
}

/// Mean statistics over one epoch (batches weighted by size).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochStats<T> {
    pub epoch: usize,
    pub loss: T,
    pub task_loss: T,
    pub kld: T,
    pub pooled_mean: T,
    pub pooled_variance: T,
}

/// A mini-batch with its channel realization frozen, so the loss is a
/// deterministic function of the parameters.
#[derive(Clone, Debug)]
pub struct Batch<T> {
    pub blocks: Vec<MessageBlock>,
    pub noise: Vec<Vec<Complex<T>>>,
    pub fading: Vec<Complex<T>>,
    pub receiver_csi: bool,
}

impl<T: Scalar> Batch<T> {
    pub fn draw<R: Rng + ?Sized>(
        system: &AeSystem<T>,
        blocks: Vec<MessageBlock>,
        channel: &ChannelSpec<T>,
        rng: &mut R,
    ) -> Self {
        let symbols = system.symbols_per_block();
        let mut noise = Vec::with_capacity(blocks.len());
        let mut fading = Vec::with_capacity(blocks.len());
        for _ in &blocks {
            fading.push(match channel.kind {
                ChannelKind::Awgn => FadingDraw::unity().h,
                ChannelKind::Rayleigh => FadingDraw::draw(rng).h,
            });
            noise.push(draw_noise(symbols, channel.noise_std, rng));
        }
        Self { blocks, noise, fading, receiver_csi: channel.receiver_csi }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchLoss<T> {
    pub total: T,
    pub task: T,
    /// `None` when the batch moments are degenerate.
    pub kld: Option<T>,
    pub pooled_mean: T,
    pub pooled_variance: T,
}

struct BlockPass<T> {
    raw: Vec<T>,
    tx_cache: ForwardCache<T>,
    rx_cache: ForwardCache<T>,
}

struct BatchPass<T> {
    blocks: Vec<BlockPass<T>>,
    kl_grad: Option<Vec<T>>,
    loss: BatchLoss<T>,
}

fn task_loss<T: Scalar>(system: &AeSystem<T>, block: &MessageBlock, p: &[T]) -> Result<T> {
    Ok(match system.mode {
        Mode::OneHot => -p[block.index()].max(T::lit(LOG_FLOOR)).ln(),
        _ => loss_bce(&system.encode_target(block)?, p)?,
    })
}

fn task_grad<T: Scalar>(system: &AeSystem<T>, block: &MessageBlock, p: &[T]) -> Result<Vec<T>> {
    Ok(match system.mode {
        Mode::OneHot => ce_grad(block.index(), p),
        _ => bce_grad(&system.encode_target(block)?, p),
    })
}

fn receiver_input<T: Scalar>(x: &[Complex<T>], h: Complex<T>, w: &[Complex<T>], csi: bool) -> Vec<T> {
    let y = apply_with(x, h, w);
    if csi {
        interleave(&y.iter().map(|&v| v / h).collect::<Vec<_>>())
    } else {
        interleave(&y)
    }
}

fn forward_batch<T: Scalar>(system: &AeSystem<T>, batch: &Batch<T>, objective: &Objective<T>) -> Result<BatchPass<T>> {
    let alpha = objective.alpha;
    if batch.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    let mut raws = Vec::with_capacity(batch.len());
    let mut components = Vec::with_capacity(batch.len() * system.n);
    for block in &batch.blocks {
        let (raw, cache) = system.transmitter.forward(&system.encode_input(block)?)?;
        let x = normalize_power(&raw)?;
        components.extend(interleave(&x.symbols));
        raws.push((raw, cache, x));
    }
    let (pooled_mean, pooled_variance) = pooled_moments(&components)?;
    let kl = kl_term(&components, system.n, objective.kl_pooling, objective.kl_target_variance);
    let (kld, kl_grad) = match kl {
        Ok((v, g)) => (Some(v), Some(g)),
        Err(e) if alpha > T::zero() => return Err(e),
        Err(_) => (None, None),
    };

    let mut blocks = Vec::with_capacity(batch.len());
    let mut task_sum = T::zero();
    for (i, (raw, tx_cache, x)) in raws.into_iter().enumerate() {
        let input = receiver_input(&x.symbols, batch.fading[i], &batch.noise[i], batch.receiver_csi);
        let (p, rx_cache) = system.receiver.forward(&input)?;
        let task = task_loss(system, &batch.blocks[i], &p)?;
        task_sum = task_sum + task;
        blocks.push(BlockPass { raw, tx_cache, rx_cache });
    }
    let task = task_sum / T::from_usize_lossy(batch.len());
    let total = if alpha > T::zero() { loss_combined(task, kld.unwrap_or_else(T::zero), alpha) } else { task };
    Ok(BatchPass { blocks, kl_grad, loss: BatchLoss { total, task, kld, pooled_mean, pooled_variance } })
}

/// Mean task loss over the batch plus `alpha` times the pooled KL term.
pub fn batch_loss<T: Scalar>(system: &AeSystem<T>, batch: &Batch<T>, objective: &Objective<T>) -> Result<BatchLoss<T>> {
    Ok(forward_batch(system, batch, objective)?.loss)
}

/// Loss and its gradients w.r.t. transmitter and receiver parameters, back
/// through receiver, channel (noise and fading frozen), power normalization
/// and transmitter.
pub fn batch_gradients<T: Scalar>(
    system: &AeSystem<T>,
    batch: &Batch<T>,
    objective: &Objective<T>,
) -> Result<(BatchLoss<T>, NetGrads<T>, NetGrads<T>)> {
    let alpha = objective.alpha;
    let pass = forward_batch(system, batch, objective)?;
    let kl_grad = pass.kl_grad.as_ref().filter(|_| alpha > T::zero());
    let scale = T::from_usize_lossy(batch.len()).recip();
    let n = system.n;
    let mut tx_grads = NetGrads::zeros_like(&system.transmitter);
    let mut rx_grads = NetGrads::zeros_like(&system.receiver);
    for (i, block) in pass.blocks.iter().enumerate() {
        let p = block.rx_cache.output();
        let dp: Vec<T> = task_grad(system, &batch.blocks[i], p)?.into_iter().map(|g| g * scale).collect();
        let d_input = system.receiver.backward_into(&block.rx_cache, &dp, &mut rx_grads)?;
        let mut dx =
            if batch.receiver_csi { d_input } else { interleave(&pullback(&deinterleave(&d_input), batch.fading[i])) };
        if let Some(kg) = kl_grad {
            for (d, &g) in dx.iter_mut().zip(&kg[i * n..(i + 1) * n]) {
                *d = *d + alpha * g;
            }
        }
        let dv = normalize_power_pullback(&block.raw, &dx);
        system.transmitter.backward_into(&block.tx_cache, &dv, &mut tx_grads)?;
    }
    Ok((pass.loss, tx_grads, rx_grads))
}

fn random_block<T: Scalar, R: Rng + ?Sized>(system: &AeSystem<T>, rng: &mut R) -> Result<MessageBlock> {
    let source: Vec<u8> = (0..system.k).map(|_| rng.random_range(0..2u8)).collect();
    system.source_to_block(&source)
}

/// Uniformly random transmitter blocks (source words, ECC-encoded in coded mode).
pub fn random_blocks<T: Scalar, R: Rng + ?Sized>(
    system: &AeSystem<T>,
    count: usize,
    rng: &mut R,
) -> Result<Vec<MessageBlock>> {
    (0..count).map(|_| random_block(system, rng)).collect()
}

/// End-to-end training with Adam on a fixed set of `train_set_size` random
/// blocks, reshuffled every epoch, with fresh channel draws for every batch.
///
/// `channel` supplies the channel model (kind, receiver CSI, noise seed); the
/// operating point is `config.ebno_train_db`.
pub fn train<T: Scalar>(
    system: &mut AeSystem<T>,
    channel: &ChannelSpec<T>,
    config: &TrainConfig<T>,
) -> Result<Vec<EpochStats<T>>> {
    if config.batch_size == 0 || config.train_set_size == 0 {
        return Err(Error::InvalidArgument("batch_size and train_set_size must be positive".into()));
    }
    if config.alpha < T::zero() || !(config.kl_target_variance > T::zero()) {
        return Err(Error::InvalidArgument("alpha must be >= 0 and kl_target_variance > 0".into()));
    }
    let channel = channel.at_ebno(config.ebno_train_db)?;
    let train_set = random_blocks(system, config.train_set_size, &mut rng::derive(config.seed, &[rng::tag::DATA]))?;
    let mut tx_adam = AdamState::for_net(&system.transmitter, config.learning_rate);
    let mut rx_adam = AdamState::for_net(&system.receiver, config.learning_rate);
    let objective = config.objective();
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng::derive(config.seed, &[rng::tag::SHUFFLE, epoch as u64]));
        let mut sums = [T::zero(); 5];
        for (b, chunk) in order.chunks(config.batch_size).enumerate() {
            let blocks = chunk.iter().map(|&i| train_set[i].clone()).collect();
            let mut noise_rng = rng::derive(channel.rng_seed, &[rng::tag::NOISE, epoch as u64, b as u64]);
            let batch = Batch::draw(system, blocks, &channel, &mut noise_rng);
            let (loss, tx_grads, rx_grads) = batch_gradients(system, &batch, &objective)?;
            if !loss.total.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch: b });
            }
            tx_adam.step_net(&mut system.transmitter, &tx_grads)?;
            rx_adam.step_net(&mut system.receiver, &rx_grads)?;
            let w = T::from_usize_lossy(chunk.len());
            let stats =
                [loss.total, loss.task, loss.kld.unwrap_or_else(T::zero), loss.pooled_mean, loss.pooled_variance];
            for (s, v) in sums.iter_mut().zip(stats) {
                *s = *s + w * v;
            }
        }
        let total = T::from_usize_lossy(train_set.len());
        let [loss, task_loss, kld, pooled_mean, pooled_variance] = sums.map(|s| s / total);
        history.push(EpochStats { epoch, loss, task_loss, kld, pooled_mean, pooled_variance });
    }
    Ok(history)
}
