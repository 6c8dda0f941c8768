//! Experiment configuration: JSON documents with defaults, validated against
//! the chosen mode, and re-emitted fully resolved next to every output.

use std::path::Path;

use featherlink::channel::ChannelKind;
use featherlink::ecc::CodecKind;
use featherlink::link::{AeShape, KlPooling, Mode, TrainConfig, Variant, ONE_HOT_MAX_K};
use serde::{Deserialize, Serialize};

/// One-hot systems above this `k` need `allow_large_one_hot`.
pub const ONE_HOT_DESK_CAP: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("config field `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("config field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    #[serde(default = "EvalConfig::default_ebno")]
    pub ebno_db: Vec<f64>,
    #[serde(default = "EvalConfig::default_blocks")]
    pub blocks: usize,
    #[serde(default = "EvalConfig::default_acf_runs")]
    pub acf_runs: usize,
    #[serde(default = "EvalConfig::default_acf_length")]
    pub acf_length: usize,
    #[serde(default = "EvalConfig::default_acf_max_lag")]
    pub acf_max_lag: usize,
    #[serde(default = "EvalConfig::default_dist_samples")]
    pub dist_samples: usize,
    #[serde(default = "EvalConfig::default_dump_blocks")]
    pub dump_blocks: usize,
    /// Reference variance for the KS distance.
    #[serde(default = "EvalConfig::default_ks_target_variance")]
    pub ks_target_variance: f64,
}

impl EvalConfig {
    fn default_ebno() -> Vec<f64> {
        vec![0.0, 2.0, 4.0, 6.0, 8.0]
    }
    fn default_blocks() -> usize {
        100_000
    }
    fn default_acf_runs() -> usize {
        10_000
    }
    fn default_acf_length() -> usize {
        1000
    }
    fn default_acf_max_lag() -> usize {
        50
    }
    fn default_dist_samples() -> usize {
        100_000
    }
    fn default_dump_blocks() -> usize {
        1000
    }
    fn default_ks_target_variance() -> f64 {
        1.0
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            ebno_db: Self::default_ebno(),
            blocks: Self::default_blocks(),
            acf_runs: Self::default_acf_runs(),
            acf_length: Self::default_acf_length(),
            acf_max_lag: Self::default_acf_max_lag(),
            dist_samples: Self::default_dist_samples(),
            dump_blocks: Self::default_dump_blocks(),
            ks_target_variance: Self::default_ks_target_variance(),
        }
    }
}

/// `k`, `k2`, `depth` and `hidden_width` may be omitted; [`ExperimentConfig::resolve`]
/// fills them from the mode and codec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub k2: Option<usize>,
    pub n: usize,
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub hidden_width: Option<usize>,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub codec: Option<CodecKind>,
    #[serde(default = "ExperimentConfig::default_channel")]
    pub channel: ChannelKind,
    #[serde(default)]
    pub receiver_csi: bool,
    #[serde(default)]
    pub ebno_train_db: f64,
    #[serde(default = "ExperimentConfig::default_alpha")]
    pub alpha: f64,
    #[serde(default = "ExperimentConfig::default_kl_target_variance")]
    pub kl_target_variance: f64,
    #[serde(default)]
    pub kl_pooling: KlPooling,
    #[serde(default = "ExperimentConfig::default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "ExperimentConfig::default_epochs")]
    pub epochs: usize,
    #[serde(default = "ExperimentConfig::default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "ExperimentConfig::default_train_set_size")]
    pub train_set_size: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub allow_large_one_hot: bool,
    #[serde(default)]
    pub eval: EvalConfig,
}

impl ExperimentConfig {
    fn default_channel() -> ChannelKind {
        ChannelKind::Awgn
    }
    fn default_alpha() -> f64 {
        0.1
    }
    fn default_kl_target_variance() -> f64 {
        1.0
    }
    fn default_learning_rate() -> f64 {
        0.001
    }
    fn default_epochs() -> usize {
        150
    }
    fn default_batch_size() -> usize {
        256
    }
    fn default_train_set_size() -> usize {
        1000
    }

    /// Minimal configuration; everything else at its default.
    pub fn new(mode: Mode, k: Option<usize>, n: usize) -> Self {
        Self {
            mode,
            k,
            k2: None,
            n,
            depth: None,
            hidden_width: None,
            variant: Variant::default(),
            codec: None,
            channel: Self::default_channel(),
            receiver_csi: false,
            ebno_train_db: 0.0,
            alpha: Self::default_alpha(),
            kl_target_variance: Self::default_kl_target_variance(),
            kl_pooling: KlPooling::default(),
            learning_rate: Self::default_learning_rate(),
            epochs: Self::default_epochs(),
            batch_size: Self::default_batch_size(),
            train_set_size: Self::default_train_set_size(),
            seed: 0,
            allow_large_one_hot: false,
            eval: EvalConfig::default(),
        }
    }

    pub fn coded(codec: CodecKind, n: usize) -> Self {
        Self { codec: Some(codec), ..Self::new(Mode::BinaryCoded, None, n) }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: Self = serde_path_to_error::deserialize(de)
            .map_err(|e| ConfigError::Parse { path: e.path().to_string(), message: e.inner().to_string() })?;
        raw.resolve()
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fills derived fields and checks mode consistency. Idempotent.
    pub fn resolve(mut self) -> Result<Self, ConfigError> {
        match self.mode {
            Mode::BinaryCoded => {
                let codec = self.codec.ok_or_else(|| invalid("codec", "required when mode is binary_coded"))?;
                let c = codec.codec();
                if self.k.is_some_and(|k| k != c.k()) {
                    return Err(invalid("k", format!("{codec} carries {} source bits", c.k())));
                }
                if self.k2.is_some_and(|k2| k2 != c.k2()) {
                    return Err(invalid("k2", format!("{codec} emits {} coded bits", c.k2())));
                }
                self.k = Some(c.k());
                self.k2 = Some(c.k2());
            }
            _ => {
                if self.codec.is_some() {
                    return Err(invalid("codec", "only valid when mode is binary_coded"));
                }
                if self.k2.is_some() {
                    return Err(invalid("k2", "only valid when mode is binary_coded"));
                }
                if self.k.is_none() {
                    return Err(invalid("k", "required unless mode is binary_coded"));
                }
            }
        }
        let k = self.k.unwrap_or_default();
        if k == 0 {
            return Err(invalid("k", "must be at least 1"));
        }
        if self.mode == Mode::OneHot {
            if k > ONE_HOT_MAX_K {
                return Err(invalid("k", format!("one-hot mode supports k <= {ONE_HOT_MAX_K}")));
            }
            if k > ONE_HOT_DESK_CAP && !self.allow_large_one_hot {
                return Err(invalid("k", format!("one-hot k > {ONE_HOT_DESK_CAP} needs allow_large_one_hot = true")));
            }
        }
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(invalid("n", format!("must be even and >= 2, got {}", self.n)));
        }
        let depth = *self.depth.get_or_insert(match self.mode {
            Mode::BinaryCoded => 3,
            _ => 2,
        });
        if depth < 2 {
            return Err(invalid("depth", "must be at least 2"));
        }
        let width = *self.hidden_width.get_or_insert(AeShape::default_hidden_width(self.mode, k));
        if width == 0 {
            return Err(invalid("hidden_width", "must be positive"));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(invalid("alpha", "must be finite and >= 0"));
        }
        if !(self.kl_target_variance > 0.0) {
            return Err(invalid("kl_target_variance", "must be > 0"));
        }
        if !(self.learning_rate > 0.0) {
            return Err(invalid("learning_rate", "must be > 0"));
        }
        if self.ebno_train_db.is_nan() {
            return Err(invalid("ebno_train_db", "must be a number"));
        }
        if self.batch_size == 0 {
            return Err(invalid("batch_size", "must be positive"));
        }
        if self.train_set_size == 0 {
            return Err(invalid("train_set_size", "must be positive"));
        }
        if self.eval.blocks == 0 {
            return Err(invalid("eval.blocks", "must be positive"));
        }
        if self.eval.ebno_db.iter().any(|e| e.is_nan()) {
            return Err(invalid("eval.ebno_db", "entries must be numbers"));
        }
        if self.eval.acf_max_lag == 0 || self.eval.acf_length <= self.eval.acf_max_lag {
            return Err(invalid("eval.acf_length", "must exceed acf_max_lag >= 1"));
        }
        if self.eval.acf_runs == 0 {
            return Err(invalid("eval.acf_runs", "must be positive"));
        }
        if !(self.eval.ks_target_variance > 0.0) {
            return Err(invalid("eval.ks_target_variance", "must be > 0"));
        }
        if self.eval.dist_samples < 2 {
            return Err(invalid("eval.dist_samples", "must be at least 2"));
        }
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k.expect("resolved config")
    }

    pub fn shape(&self) -> AeShape {
        let base = match (self.mode, self.codec) {
            (Mode::BinaryCoded, Some(c)) => AeShape::coded(c, self.n, self.depth.unwrap_or(3)),
            _ => AeShape::new(self.mode, self.k(), self.n, self.depth.unwrap_or(2)),
        };
        let base = match self.hidden_width {
            Some(w) => base.with_hidden_width(w),
            None => base,
        };
        base.with_variant(self.variant)
    }

    pub fn train_config(&self) -> TrainConfig<f64> {
        TrainConfig {
            learning_rate: self.learning_rate,
            ebno_train_db: self.ebno_train_db,
            alpha: self.alpha,
            kl_target_variance: self.kl_target_variance,
            kl_pooling: self.kl_pooling,
            epochs: self.epochs,
            batch_size: self.batch_size,
            train_set_size: self.train_set_size,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_one_hot_gets_defaults() {
        let c = ExperimentConfig::from_json(r#"{"mode":"onehot","k":4,"n":20}"#).unwrap();
        assert_eq!(c.learning_rate, 0.001);
        assert_eq!(c.ebno_train_db, 0.0);
        assert_eq!(c.train_set_size, 1000);
        assert_eq!(c.depth, Some(2));
        assert_eq!(c.hidden_width, Some(16));
        assert_eq!(c.channel, ChannelKind::Awgn);
        assert_eq!(c.eval, EvalConfig::default());
    }

    #[test]
    fn coded_without_codec_names_the_field() {
        let e = ExperimentConfig::from_json(r#"{"mode":"binary_coded","n":20}"#).unwrap_err();
        assert!(e.to_string().contains("`codec`"), "{e}");
    }

    #[test]
    fn coded_fills_dimensions_from_codec() {
        let c = ExperimentConfig::from_json(r#"{"mode":"binary_coded","codec":"rs_21_9","n":40}"#).unwrap();
        assert_eq!((c.k, c.k2, c.depth, c.hidden_width), (Some(9), Some(21), Some(3), Some(128)));
        let e = ExperimentConfig::from_json(r#"{"mode":"binary_coded","codec":"rs_21_9","k":4,"n":40}"#).unwrap_err();
        assert!(e.to_string().contains("`k`"));
    }

    #[test]
    fn resolved_config_round_trips() {
        for text in [
            r#"{"mode":"onehot","k":4,"n":20}"#,
            r#"{"mode":"binary_coded","codec":"bch_14_4","n":20,"channel":"rayleigh","alpha":0.5}"#,
            r#"{"mode":"binary_direct","k":4,"n":20,"depth":5,"eval":{"blocks":1000}}"#,
        ] {
            let c = ExperimentConfig::from_json(text).unwrap();
            let again = ExperimentConfig::from_json(&c.to_json()).unwrap();
            assert_eq!(again, c);
            assert_eq!(again.to_json(), c.to_json());
        }
    }

    #[test]
    fn bad_documents_report_field_paths() {
        let cases = [
            (r#"{"mode":"onehot","k":4,"n":21}"#, "`n`"),
            (r#"{"mode":"onehot","n":20}"#, "`k`"),
            (r#"{"mode":"onehot","k":4,"n":20,"colour":1}"#, "colour"),
            (r#"{"mode":"onehot","k":4,"n":20,"eval":{"blocks":"many"}}"#, "eval.blocks"),
            (r#"{"mode":"onehot","k":4}"#, "`n`"),
            (r#"{"mode":"onehot","k":17,"n":20}"#, "allow_large_one_hot"),
            (r#"{"mode":"onehot","k":4,"n":20,"codec":"bch_14_4"}"#, "`codec`"),
            (r#"{"mode":"onehot","k":4,"n":20,"alpha":-1}"#, "`alpha`"),
            (r#"{"mode":"quantum","k":4,"n":20}"#, "mode"),
        ];
        for (text, needle) in cases {
            let e = ExperimentConfig::from_json(text).unwrap_err().to_string();
            assert!(e.contains(needle), "{text}: {e}");
        }
        let ok = ExperimentConfig::from_json(r#"{"mode":"onehot","k":17,"n":40,"allow_large_one_hot":true}"#);
        assert!(ok.is_ok());
    }

    #[test]
    fn shape_and_train_config_follow_fields() {
        let c = ExperimentConfig::from_json(r#"{"mode":"binary_direct","k":4,"n":20,"depth":3,"seed":9,"alpha":0}"#)
            .unwrap();
        let s = c.shape();
        assert_eq!((s.mode, s.k, s.n, s.depth, s.hidden_width), (Mode::BinaryDirect, 4, 20, 3, 16));
        let t = c.train_config();
        assert_eq!((t.seed, t.alpha, t.epochs, t.batch_size), (9, 0.0, 150, 256));
    }
}
