//! Named figure presets. Each trains its models one after another, evaluates
//! them and writes plot-ready tables plus the saved models under `models/`.

use std::path::Path;

use anyhow::{bail, Result};
use featherlink::analysis::{acf_campaign, AcfReport, BlerCurves, DsssSource, GaussianSource, QpskSource};
use featherlink::channel::ChannelKind;
use featherlink::ecc::CodecKind;
use featherlink::link::Mode;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiment::{
    acf_rows, acf_settings, bler_rows, dist_rows, dump, eval_acf, eval_bler, eval_dist, train_model, Trained,
};
use crate::output::{num, RunDir, Series};

pub const FIGURES: [&str; 7] = ["fig2", "fig3", "fig4-5", "fig6", "fig7", "fig8", "fig9"];

pub const FIG2_N: [usize; 9] = [4, 8, 20, 40, 80, 128, 256, 1024, 2048];
pub const FIG4_N: [usize; 5] = [8, 20, 40, 80, 128];
pub const DIRECT_DEPTHS: [usize; 5] = [2, 3, 4, 5, 6];
pub const ONE_HOT_DEPTHS: [usize; 3] = [2, 3, 4];

/// KL weight for the one-hot featureless presets, picked by `sweep-alpha`
/// on AE(4,20) as the lowest ACF whose BLER stays within 2x of CE-only.
pub const FEATURELESS_ALPHA: f64 = 1.0;
/// KL weight for the coded presets.
pub const CODED_ALPHA: f64 = 0.1;
/// Coded systems keep improving well past the one-hot schedule; every
/// system in a coded comparison trains this long.
pub const CODED_EPOCHS: usize = 600;
/// Hidden width of the direct-input baselines next to RS and conv systems,
/// where `2^k` would be 512 or 1024.
pub const WIDE_DIRECT_WIDTH: usize = 128;

const BLER_COLUMNS: [&str; 5] = ["ebno_db", "blocks", "errors", "bler", "ci95"];

#[derive(Debug, thiserror::Error)]
#[error("unknown figure `{0}`; valid ids: {list}", list = FIGURES.join(", "))]
pub struct UnknownFigure(pub String);

/// Command-line knobs applied on top of every preset configuration.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: u64,
    pub blocks: Option<usize>,
    pub alpha: Option<f64>,
    pub channel: Option<ChannelKind>,
    pub epochs: Option<usize>,
    pub acf_runs: Option<usize>,
}

impl Overrides {
    fn apply(&self, mut cfg: ExperimentConfig) -> Result<ExperimentConfig> {
        cfg.seed = self.seed;
        if let Some(b) = self.blocks {
            cfg.eval.blocks = b;
        }
        if let Some(e) = self.epochs {
            cfg.epochs = e;
        }
        if let Some(r) = self.acf_runs {
            cfg.eval.acf_runs = r;
        }
        Ok(cfg.resolve()?)
    }

    fn channels(&self) -> Vec<ChannelKind> {
        match self.channel {
            Some(c) => vec![c],
            None => vec![ChannelKind::Awgn, ChannelKind::Rayleigh],
        }
    }
}

fn one_hot(n: usize, alpha: f64, channel: ChannelKind) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(Mode::OneHot, Some(4), n);
    c.alpha = alpha;
    c.channel = channel;
    c
}

fn direct(k: usize, n: usize, depth: usize, alpha: f64, channel: ChannelKind) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(Mode::BinaryDirect, Some(k), n);
    c.depth = Some(depth);
    c.alpha = alpha;
    c.channel = channel;
    c
}

fn coded(codec: CodecKind, n: usize, alpha: f64, channel: ChannelKind) -> ExperimentConfig {
    let mut c = ExperimentConfig::coded(codec, n);
    c.alpha = alpha;
    c.channel = channel;
    c.epochs = CODED_EPOCHS;
    c
}

fn fit(run: &mut RunDir, label: &str, cfg: &ExperimentConfig) -> Result<Trained> {
    let trained = train_model(cfg)?;
    run.write_text(&format!("models/{label}.json"), &trained.saved()?.to_json()?)?;
    run.log(format!("{label}: {} epochs, final task loss {}", trained.history.len(), num(trained.final_task_loss())));
    Ok(trained)
}

fn keys(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

fn header<'a>(keys: &[&'a str], rest: &[&'a str]) -> Vec<&'a str> {
    keys.iter().chain(rest).copied().collect()
}

fn push_curves(rows: &mut Vec<Vec<String>>, prefix: &[&str], curves: &BlerCurves) {
    let mut k = keys(prefix);
    k.push(curves.raw.label.clone());
    rows.extend(bler_rows(&k, &curves.raw));
    if let Some(d) = &curves.decoded {
        k.pop();
        k.push(d.label.clone());
        rows.extend(bler_rows(&k, d));
    }
}

pub fn reproduce(id: &str, ov: &Overrides, out: &Path) -> Result<()> {
    let build: fn(&Overrides, &mut RunDir) -> Result<()> = match id {
        "fig2" => fig2,
        "fig3" => fig3,
        "fig4-5" => fig4_5,
        "fig6" => fig6,
        "fig7" => fig7,
        "fig8" => fig8,
        "fig9" => fig9,
        other => bail!(UnknownFigure(other.to_string())),
    };
    let mut run = RunDir::create(out, &format!("reproduce {id}"), ov.seed)?;
    build(ov, &mut run)?;
    run.finish()?;
    Ok(())
}

/// CE-only one-hot AE(4, n) across `n`: ACF summary and BLER per `n`.
fn fig2(ov: &Overrides, run: &mut RunDir) -> Result<()> {
    let channel = ov.channel.unwrap_or(ChannelKind::Awgn);
    let (mut series, mut acf, mut bler) = (Vec::new(), Vec::new(), Vec::new());
    for n in FIG2_N {
        let cfg = ov.apply(one_hot(n, ov.alpha.unwrap_or(0.0), channel))?;
        let label = format!("n{n}");
        let t = fit(run, &label, &cfg)?;
        let r = eval_acf(&t.system, &cfg)?;
        acf.push(vec![n.to_string(), num(r.mean_max_abs), num(r.std_error), num(r.max_abs)]);
        bler.extend(bler_rows(&[n.to_string()], &eval_bler(&t.system, &cfg)?.raw));
        series.push(Series::new(label, &cfg));
    }
    run.table("acf.csv", &["n", "mean_max_abs", "std_error", "max_abs"], acf, &series, json!({}))?;
    run.table("bler.csv", &header(&["n"], &BLER_COLUMNS), bler, &series, json!({}))?;
    Ok(())
}

/// BLER against layer count for direct-input and one-hot AE(4,20).
fn fig3(ov: &Overrides, run: &mut RunDir) -> Result<()> {
    let channel = ov.channel.unwrap_or(ChannelKind::Awgn);
    let alpha = ov.alpha.unwrap_or(0.0);
    let (mut series, mut rows) = (Vec::new(), Vec::new());
    let plans = DIRECT_DEPTHS.iter().map(|&d| ("k_bit_input", d, direct(4, 20, d, alpha, channel))).chain(
        ONE_HOT_DEPTHS.iter().map(|&d| {
            let mut c = one_hot(20, alpha, channel);
            c.depth = Some(d);
            ("one_hot_input", d, c)
        }),
    );
    for (input, depth, cfg) in plans {
        let cfg = ov.apply(cfg)?;
        let label = format!("{input}_d{depth}");
        let t = fit(run, &label, &cfg)?;
        rows.extend(bler_rows(&[input.to_string(), depth.to_string()], &eval_bler(&t.system, &cfg)?.raw));
        series.push(Series::new(label, &cfg));
    }
    run.table("bler.csv", &header(&["input", "layers"], &BLER_COLUMNS), rows, &series, json!({}))?;
    Ok(())
}

/// CE-only against CE + KL: ACF across `n`, per-lag ACF at n = 20, and BLER
/// at n = 20 on each channel.
fn fig4_5(ov: &Overrides, run: &mut RunDir) -> Result<()> {
    let alpha = ov.alpha.unwrap_or(FEATURELESS_ALPHA);
    let losses = [("ce", 0.0), ("ce_kl", alpha)];
    let (mut series, mut summary, mut lags) = (Vec::new(), Vec::new(), Vec::new());
    let mut awgn20 = Vec::new();
    for n in FIG4_N {
        for (loss, a) in losses {
            let cfg = ov.apply(one_hot(n, a, ChannelKind::Awgn))?;
            let label = format!("{loss}_n{n}");
            let t = fit(run, &label, &cfg)?;
            let r = eval_acf(&t.system, &cfg)?;
            summary.push(vec![n.to_string(), loss.to_string(), num(r.mean_max_abs), num(r.std_error)]);
            if n == 20 {
                lags.extend(acf_rows(&[loss.to_string()], &r));
                awgn20.push((loss, t));
            }
            series.push(Series::new(label, &cfg));
        }
    }
    run.table("acf_vs_n.csv", &["n", "loss", "mean_max_abs", "std_error"], summary, &series, json!({}))?;
    run.table("acf_lags.csv", &["loss", "lag", "abs_acf"], lags, &series, json!({ "n": 20 }))?;

    let mut bler = Vec::new();
    for channel in ov.channels() {
        for (loss, a) in losses {
            let cfg = ov.apply(one_hot(20, a, channel))?;
            let curves = match awgn20.iter().find(|(l, t)| *l == loss && t.config == cfg) {
                Some((_, t)) => eval_bler(&t.system, &cfg)?,
                None => {
                    let label = format!("{loss}_n20_{channel}");
                    let t = fit(run, &label, &cfg)?;
                    series.push(Series::new(label, &cfg));
                    eval_bler(&t.system, &cfg)?
                }
            };
            bler.extend(bler_rows(&[channel.to_string(), loss.to_string()], &curves.raw));
        }
    }
    run.table("bler.csv", &header(&["channel", "loss"], &BLER_COLUMNS), bler, &series, json!({}))?;
    Ok(())
}

/// Constellations, component statistics and per-lag ACF of AE(4,20) under
/// both losses, next to Gaussian, QPSK and DSSS reference signals.
fn fig6(ov: &Overrides, run: &mut RunDir) -> Result<()> {
    let channel = ov.channel.unwrap_or(ChannelKind::Awgn);
    let alpha = ov.alpha.unwrap_or(FEATURELESS_ALPHA);
    let (mut series, mut dist, mut lags, mut summary) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut campaign = None;
    let mut add_acf = |signal: &str, r: &AcfReport, lags: &mut Vec<Vec<String>>| {
        lags.extend(acf_rows(&[signal.to_string()], r));
        summary.push(vec![signal.to_string(), num(r.mean_max_abs), num(r.std_error)]);
    };
    for (loss, a) in [("ce", 0.0), ("ce_kl", alpha)] {
        let cfg = ov.apply(one_hot(20, a, channel))?;
        let t = fit(run, loss, &cfg)?;
        let points = dump(&t.system, &cfg)?;
        let s = [Series::new(loss, &cfg)];
        run.table(
            &format!("constellation_{loss}.csv"),
            &["re", "im"],
            points.iter().map(|c| vec![num(c.re), num(c.im)]).collect(),
            &s,
            json!({ "blocks": cfg.eval.dump_blocks }),
        )?;
        dist.extend(dist_rows(&[loss.to_string()], &eval_dist(&t.system, &cfg)?));
        add_acf(loss, &eval_acf(&t.system, &cfg)?, &mut lags);
        campaign = Some(acf_settings(&cfg));
        series.extend(s);
    }
    let campaign = campaign.expect("two losses ran");
    add_acf("gaussian", &acf_campaign::<f64, _>(&GaussianSource, &campaign)?, &mut lags);
    add_acf("qpsk", &acf_campaign::<f64, _>(&QpskSource, &campaign)?, &mut lags);
    add_acf("dsss", &acf_campaign::<f64, _>(&DsssSource::default(), &campaign)?, &mut lags);
    let refs = json!({ "campaign": campaign, "dsss": { "pn_length": 31, "periods_per_bit": DsssSource::default().periods_per_bit } });
    run.table("dist.csv", &["loss", "stat", "value"], dist, &series, json!({}))?;
    run.table("acf_lags.csv", &["signal", "lag", "abs_acf"], lags, &series, refs.clone())?;
    run.table("acf_summary.csv", &["signal", "mean_max_abs", "std_error"], summary, &series, refs)?;
    Ok(())
}

/// The three systems compared in `fig7`, before command-line overrides:
/// BCH(14,4) coded, 3-layer direct k-bit and 2-layer one-hot, all n = 20.
pub fn bch_comparison(alpha: f64, channel: ChannelKind) -> [(&'static str, ExperimentConfig); 3] {
    [
        ("coded", coded(CodecKind::Bch14_4, 20, alpha, channel)),
        ("direct", ExperimentConfig { epochs: CODED_EPOCHS, ..direct(4, 20, 3, alpha, channel) }),
        ("one_hot", ExperimentConfig { epochs: CODED_EPOCHS, ..one_hot(20, alpha, channel) }),
    ]
}

/// BCH(14,4) coded AE against direct k-bit and one-hot AEs, n = 20.
fn fig7(ov: &Overrides, run: &mut RunDir) -> Result<()> {
    let alpha = ov.alpha.unwrap_or(CODED_ALPHA);
    let (mut series, mut rows) = (Vec::new(), Vec::new());
    for channel in ov.channels() {
        for (name, cfg) in bch_comparison(alpha, channel) {
            let cfg = ov.apply(cfg)?;
            let label = format!("{name}_{channel}");
            let t = fit(run, &label, &cfg)?;
            push_curves(&mut rows, &[&channel.to_string()], &eval_bler(&t.system, &cfg)?);
            series.push(Series::new(label, &cfg));
        }
    }
    run.table("bler.csv", &header(&["channel", "curve"], &BLER_COLUMNS), rows, &series, json!({}))?;
    Ok(())
}

/// RS(21,9) at n = 40 and conv(20,10) at n = 80 against direct-input AEs.
fn fig8(ov: &Overrides, run: &mut RunDir) -> Result<()> {
    let alpha = ov.alpha.unwrap_or(CODED_ALPHA);
    let (mut series, mut rows) = (Vec::new(), Vec::new());
    for channel in ov.channels() {
        for (codec, n) in [(CodecKind::Rs21_9, 40), (CodecKind::Conv20_10, 80)] {
            let k = codec.codec().k();
            let mut plain = direct(k, n, 3, alpha, channel);
            plain.epochs = CODED_EPOCHS;
            plain.hidden_width = Some(WIDE_DIRECT_WIDTH);
            for (name, cfg) in [("coded", coded(codec, n, alpha, channel)), ("direct", plain)] {
                let cfg = ov.apply(cfg)?;
                let label = format!("{codec}_{name}_{channel}");
                let t = fit(run, &label, &cfg)?;
                push_curves(&mut rows, &[&channel.to_string(), codec.name()], &eval_bler(&t.system, &cfg)?);
                series.push(Series::new(label, &cfg));
            }
        }
    }
    run.table("bler.csv", &header(&["channel", "code", "curve"], &BLER_COLUMNS), rows, &series, json!({}))?;
    Ok(())
}

/// BCH-coded AE trained CE-only against CE + KL: ACF and BLER.
fn fig9(ov: &Overrides, run: &mut RunDir) -> Result<()> {
    let alpha = ov.alpha.unwrap_or(CODED_ALPHA);
    let (mut series, mut lags, mut summary, mut bler) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for channel in ov.channels() {
        for (loss, a) in [("ce", 0.0), ("ce_kl", alpha)] {
            let cfg = ov.apply(coded(CodecKind::Bch14_4, 20, a, channel))?;
            let label = format!("{loss}_{channel}");
            let t = fit(run, &label, &cfg)?;
            if channel == ChannelKind::Awgn || ov.channel.is_some() {
                let r = eval_acf(&t.system, &cfg)?;
                lags.extend(acf_rows(&[loss.to_string()], &r));
                summary.push(vec![loss.to_string(), num(r.mean_max_abs), num(r.std_error)]);
            }
            push_curves(&mut bler, &[&channel.to_string(), loss], &eval_bler(&t.system, &cfg)?);
            series.push(Series::new(label, &cfg));
        }
    }
    run.table("acf_lags.csv", &["loss", "lag", "abs_acf"], lags, &series, json!({}))?;
    run.table("acf_summary.csv", &["loss", "mean_max_abs", "std_error"], summary, &series, json!({}))?;
    run.table("bler.csv", &header(&["channel", "loss", "curve"], &BLER_COLUMNS), bler, &series, json!({}))?;
    Ok(())
}
