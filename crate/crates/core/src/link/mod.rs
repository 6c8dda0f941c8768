//! Autoencoder transceivers: construction, power normalization, losses,
//! end-to-end training, and the transmit/receive paths.

mod loss;
mod persist;
mod power;
mod system;
mod train;

pub use loss::{
    bce_grad, ce_grad, kl_term, kld_from_moments, kld_grad, loss_bce, loss_ce, loss_combined, loss_kld,
    loss_kld_with_target, pooled_moments, KlPooling, LOG_FLOOR,
};
pub use persist::{SavedSystem, SystemHeader};
pub use power::{normalize_power, normalize_power_pullback, TxSignal};
pub use system::{build_ae, AeShape, AeSystem, MessageBlock, Mode, Reception, Variant, ONE_HOT_MAX_K};
pub use train::{
    batch_gradients, batch_loss, random_blocks, train, Batch, BatchLoss, EpochStats, Objective, TrainConfig,
};
