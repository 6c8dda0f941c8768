//! Training and evaluation driven by an [`ExperimentConfig`], plus the row
//! layouts shared by the subcommands and presets.

use std::path::Path;

use anyhow::{bail, Context, Result};
use featherlink::analysis::{
    acf_campaign, bler_campaign, component_samples, constellation_dump, distribution_stats, AcfCampaign, AcfReport,
    AeSource, BlerCurve, BlerCurves, DistStats,
};
use featherlink::link::{build_ae, train, EpochStats, SavedSystem};
use featherlink::rng::{self, tag};
use featherlink::{AeSystem64, ChannelSpec64, Complex64};

use crate::config::ExperimentConfig;
use crate::output::num;

pub const HISTORY_HEADER: [&str; 6] = ["epoch", "loss", "task_loss", "kld", "pooled_mean", "pooled_variance"];

pub struct Trained {
    pub config: ExperimentConfig,
    pub system: AeSystem64,
    pub history: Vec<EpochStats<f64>>,
}

impl Trained {
    pub fn saved(&self) -> Result<SavedSystem> {
        Ok(SavedSystem::capture(&self.system, self.config.alpha, channel(&self.config)?, self.config.seed))
    }

    pub fn final_task_loss(&self) -> f64 {
        self.history.last().map_or(f64::NAN, |h| h.task_loss)
    }

    pub fn history_rows(&self) -> Vec<Vec<String>> {
        self.history
            .iter()
            .map(|h| {
                vec![
                    h.epoch.to_string(),
                    num(h.loss),
                    num(h.task_loss),
                    num(h.kld),
                    num(h.pooled_mean),
                    num(h.pooled_variance),
                ]
            })
            .collect()
    }
}

/// The configured channel at the training Eb/N0, seeded by the config seed.
pub fn channel(cfg: &ExperimentConfig) -> Result<ChannelSpec64> {
    let mut ch = ChannelSpec64::new(cfg.channel, cfg.ebno_train_db, cfg.k(), cfg.n, cfg.seed)?;
    ch.receiver_csi = cfg.receiver_csi;
    Ok(ch)
}

pub fn train_model(cfg: &ExperimentConfig) -> Result<Trained> {
    let mut system = build_ae(&cfg.shape(), cfg.seed)?;
    let history = train(&mut system, &channel(cfg)?, &cfg.train_config()).map_err(|e| match e {
        featherlink::Error::Degenerate(_) => anyhow::Error::new(e).context(format!(
            "training seed {} produced an all-zero transmitter block (every hidden ReLU is off for some message); \
             try another --seed or a wider hidden_width",
            cfg.seed
        )),
        e => e.into(),
    })?;
    Ok(Trained { config: cfg.clone(), system, history })
}

/// Loads a saved system and checks it was built for `cfg`.
pub fn load_model(path: &Path, cfg: &ExperimentConfig) -> Result<AeSystem64> {
    if !path.exists() {
        bail!("no model at {}; run `featherlink train` first or pass --model", path.display());
    }
    let saved = SavedSystem::load(path).with_context(|| format!("loading model {}", path.display()))?;
    let h = &saved.header;
    if h.mode != cfg.mode || h.k != cfg.k() || h.n != cfg.n || h.codec != cfg.codec {
        bail!(
            "model {} is {} k={} n={}, config asks for {} k={} n={}",
            path.display(),
            h.mode.name(),
            h.k,
            h.n,
            cfg.mode.name(),
            cfg.k(),
            cfg.n
        );
    }
    Ok(saved.into_system()?)
}

pub fn eval_bler(system: &AeSystem64, cfg: &ExperimentConfig) -> Result<BlerCurves> {
    Ok(bler_campaign(system, &channel(cfg)?, &cfg.eval.ebno_db, cfg.eval.blocks)?)
}

pub fn acf_settings(cfg: &ExperimentConfig) -> AcfCampaign {
    AcfCampaign { runs: cfg.eval.acf_runs, length: cfg.eval.acf_length, max_lag: cfg.eval.acf_max_lag, seed: cfg.seed }
}

pub fn eval_acf(system: &AeSystem64, cfg: &ExperimentConfig) -> Result<AcfReport> {
    Ok(acf_campaign(&AeSource { system }, &acf_settings(cfg))?)
}

pub fn eval_dist(system: &AeSystem64, cfg: &ExperimentConfig) -> Result<DistStats> {
    let mut r = rng::derive(cfg.seed, &[tag::DUMP, 0]);
    let mut samples = component_samples(system, cfg.eval.dist_samples.div_ceil(cfg.n), &mut r)?;
    samples.truncate(cfg.eval.dist_samples);
    Ok(distribution_stats(&samples, cfg.eval.ks_target_variance)?)
}

pub fn dump(system: &AeSystem64, cfg: &ExperimentConfig) -> Result<Vec<Complex64>> {
    let mut r = rng::derive(cfg.seed, &[tag::DUMP, 1]);
    Ok(constellation_dump(system, cfg.eval.dump_blocks, &mut r)?)
}

/// BLER rows, each prefixed with `keys`.
pub fn bler_rows(keys: &[String], curve: &BlerCurve) -> Vec<Vec<String>> {
    curve
        .points
        .iter()
        .map(|p| {
            let mut row = keys.to_vec();
            row.extend([num(p.ebno_db), p.blocks.to_string(), p.errors.to_string(), num(p.bler), num(p.ci95)]);
            row
        })
        .collect()
}

/// Per-lag rows, each prefixed with `keys`.
pub fn acf_rows(keys: &[String], report: &AcfReport) -> Vec<Vec<String>> {
    report
        .per_lag
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = keys.to_vec();
            row.extend([(i + 1).to_string(), num(*v)]);
            row
        })
        .collect()
}

pub fn dist_rows(keys: &[String], stats: &DistStats) -> Vec<Vec<String>> {
    [
        ("samples", stats.samples as f64),
        ("mean", stats.mean),
        ("variance", stats.variance),
        ("excess_kurtosis", stats.excess_kurtosis),
        ("ks", stats.ks),
        ("target_variance", stats.target_variance),
    ]
    .into_iter()
    .map(|(k, v)| {
        let mut row = keys.to_vec();
        row.extend([k.to_string(), num(v)]);
        row
    })
    .collect()
}

pub fn acf_summary(report: &AcfReport) -> serde_json::Value {
    serde_json::json!({
        "runs": report.runs,
        "mean_max_abs": report.mean_max_abs,
        "std_error": report.std_error,
        "max_abs": report.max_abs,
    })
}
