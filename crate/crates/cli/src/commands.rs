//! Subcommand definitions and their implementations.

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use featherlink::channel::ChannelKind;
use featherlink::ecc::CodecKind;
use featherlink::link::Mode;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiment::{
    acf_rows, acf_summary, bler_rows, dist_rows, dump, eval_acf, eval_bler, eval_dist, load_model, train_model,
    HISTORY_HEADER,
};
use crate::output::{num, RunDir, Series};
use crate::presets::{self, Overrides};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "featherlink", version, about = "Train and evaluate featureless autoencoder links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one system and save it with its config and loss history.
    Train(RunArgs),
    /// BLER waterfall of a saved system.
    EvalBler(EvalArgs),
    /// ACF campaign on a saved system's transmit stream.
    EvalAcf(EvalArgs),
    /// Moments and KS distance of a saved system's transmitted components.
    EvalDist(EvalArgs),
    /// Transmitted symbols of random messages, for constellation plots.
    DumpConstellation(EvalArgs),
    /// Exhaustive and randomized codec checks against brute-force decoders.
    EccSelftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Train and evaluate one system per KL weight.
    SweepAlpha {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated KL weights.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.01, 0.1, 1.0])]
        alphas: Vec<f64>,
    },
    /// Regenerate the tables behind one figure.
    Reproduce {
        /// One of fig2, fig3, fig4-5, fig6, fig7, fig8, fig9.
        figure: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Flags shared by every training or evaluation command.
#[derive(Clone, Debug, Default, Args)]
pub struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Blocks per BLER point.
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub channel: Option<ChannelKind>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub acf_runs: Option<usize>,
}

/// A configuration given inline instead of through `--config`.
#[derive(Clone, Debug, Default, Args)]
pub struct ShapeFlags {
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = parse_codec)]
    pub codec: Option<CodecKind>,
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub shape: ShapeFlags,
}

#[derive(Clone, Debug, Default, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Saved model; defaults to `<out>/model.json`.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    serde_json::from_value(json!(s)).map_err(|_| format!("unknown mode `{s}` (onehot, binary_direct, binary_coded)"))
}

fn parse_codec(s: &str) -> Result<CodecKind, String> {
    CodecKind::from_name(s).map_err(|e| e.to_string())
}

const DEFAULT_OUT: &str = "runs/latest";

impl Common {
    fn out_or(&self, fallback: &Path) -> PathBuf {
        self.out.clone().unwrap_or_else(|| fallback.to_path_buf())
    }

    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed.unwrap_or(0),
            blocks: self.blocks,
            alpha: self.alpha,
            channel: self.channel,
            epochs: self.epochs,
            acf_runs: self.acf_runs,
        }
    }

    /// Flag overrides on top of a parsed configuration, re-validated.
    fn apply(&self, mut cfg: ExperimentConfig) -> Result<ExperimentConfig> {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(b) = self.blocks {
            cfg.eval.blocks = b;
        }
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if let Some(c) = self.channel {
            cfg.channel = c;
        }
        if let Some(e) = self.epochs {
            cfg.epochs = e;
        }
        if let Some(r) = self.acf_runs {
            cfg.eval.acf_runs = r;
        }
        Ok(cfg.resolve()?)
    }
}

impl ShapeFlags {
    fn config(&self) -> Result<Option<ExperimentConfig>> {
        let (Some(mode), Some(n)) = (self.mode, self.n) else {
            if self.mode.is_some()
                || self.n.is_some()
                || self.k.is_some()
                || self.codec.is_some()
                || self.depth.is_some()
            {
                bail!("inline configuration needs both --mode and --n");
            }
            return Ok(None);
        };
        let mut cfg = ExperimentConfig::new(mode, self.k, n);
        cfg.codec = self.codec;
        cfg.depth = self.depth;
        Ok(Some(cfg.resolve()?))
    }
}

fn run_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let s = &args.shape;
    let inline = s.mode.is_some() || s.n.is_some() || s.k.is_some() || s.codec.is_some() || s.depth.is_some();
    let cfg = match (&args.common.config, inline) {
        (Some(_), true) => bail!("give either --config or --mode/--n, not both"),
        (Some(path), false) => ExperimentConfig::load(path)?,
        (None, true) => s.config()?.expect("inline flags present"),
        (None, false) => bail!("no configuration: pass --config <path> or --mode and --n"),
    };
    args.common.apply(cfg)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => train(&args),
        Command::EvalBler(args) => eval(&args, "eval-bler"),
        Command::EvalAcf(args) => eval(&args, "eval-acf"),
        Command::EvalDist(args) => eval(&args, "eval-dist"),
        Command::DumpConstellation(args) => eval(&args, "dump-constellation"),
        Command::EccSelftest { seed } => ecc_selftest(seed),
        Command::SweepAlpha { run, alphas } => sweep_alpha(&run, &alphas),
        Command::Reproduce { figure, common } => {
            let out = common.out_or(&Path::new("runs").join(&figure));
            presets::reproduce(&figure, &common.overrides(), &out)
        }
    }
}

fn train(args: &RunArgs) -> Result<()> {
    let cfg = run_config(args)?;
    let mut run = RunDir::create(&args.common.out_or(Path::new(DEFAULT_OUT)), "train", cfg.seed)?;
    run.write_text("config.json", &format!("{}\n", cfg.to_json()))?;
    let t = train_model(&cfg)?;
    run.write_text("model.json", &t.saved()?.to_json()?)?;
    let series = [Series::new("model", &cfg)];
    let summary = json!({ "final_task_loss": t.final_task_loss() });
    run.table("history.csv", &HISTORY_HEADER, t.history_rows(), &series, summary)?;
    run.log(format!("final task loss {}", num(t.final_task_loss())));
    run.finish()?;
    Ok(())
}

/// Model from `--model` or `<out>/model.json`; config from `--config` or the
/// `config.json` saved next to the model.
fn eval(args: &EvalArgs, command: &str) -> Result<()> {
    let c = &args.common;
    let model = match (&args.model, &c.out) {
        (Some(m), _) => m.clone(),
        (None, Some(out)) => out.join("model.json"),
        (None, None) => Path::new(DEFAULT_OUT).join("model.json"),
    };
    if !model.exists() {
        bail!("no model at {}; run `featherlink train` first or pass --model", model.display());
    }
    let dir = model.parent().map(Path::to_path_buf).unwrap_or_default();
    let cfg_path = c.config.clone().unwrap_or_else(|| dir.join("config.json"));
    if !cfg_path.exists() {
        bail!("no config at {}; pass --config", cfg_path.display());
    }
    let cfg = c.apply(ExperimentConfig::load(&cfg_path)?)?;
    let system = load_model(&model, &cfg)?;
    let mut run = RunDir::create(&c.out_or(&dir), command, cfg.seed)?;
    run.log(format!("model {}", model.display()));
    let series = [Series::new("model", &cfg)];
    match command {
        "eval-bler" => {
            let curves = eval_bler(&system, &cfg)?;
            let cols = ["ebno_db", "blocks", "errors", "bler", "ci95"];
            let label = json!({ "curve": curves.raw.label });
            run.table("bler.csv", &cols, bler_rows(&[], &curves.raw), &series, label)?;
            if let Some(d) = &curves.decoded {
                let label = json!({ "curve": d.label });
                run.table("bler_decoded.csv", &cols, bler_rows(&[], d), &series, label)?;
            }
        }
        "eval-acf" => {
            let r = eval_acf(&system, &cfg)?;
            run.table("acf.csv", &["lag", "abs_acf"], acf_rows(&[], &r), &series, acf_summary(&r))?;
        }
        "eval-dist" => {
            let s = eval_dist(&system, &cfg)?;
            run.table("dist.csv", &["stat", "value"], dist_rows(&[], &s), &series, json!({}))?;
        }
        "dump-constellation" => {
            let rows = dump(&system, &cfg)?.iter().map(|c| vec![num(c.re), num(c.im)]).collect();
            let meta = json!({ "blocks": cfg.eval.dump_blocks });
            run.table("constellation.csv", &["re", "im"], rows, &series, meta)?;
        }
        other => unreachable!("not an eval command: {other}"),
    }
    run.finish()?;
    Ok(())
}

fn ecc_selftest(seed: u64) -> Result<()> {
    let checks = selftest::run_all(seed);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        bail!("{failed} of {} codec checks failed", checks.len());
    }
    Ok(())
}

pub const SWEEP_HEADER: [&str; 8] =
    ["alpha", "mean_max_abs", "acf_std_error", "ebno_db", "blocks", "errors", "bler", "ci95"];

fn sweep_alpha(args: &RunArgs, alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        bail!("--alphas needs at least one value");
    }
    let base = run_config(args)?;
    let mut run = RunDir::create(&args.common.out_or(Path::new(DEFAULT_OUT)), "sweep-alpha", base.seed)?;
    let (mut series, mut rows) = (Vec::new(), Vec::new());
    for &alpha in alphas {
        let cfg = ExperimentConfig { alpha, ..base.clone() }.resolve()?;
        let label = format!("alpha_{alpha}");
        let t = train_model(&cfg)?;
        run.write_text(&format!("models/{label}.json"), &t.saved()?.to_json()?)?;
        let acf = eval_acf(&t.system, &cfg)?;
        let keys = [num(alpha), num(acf.mean_max_abs), num(acf.std_error)];
        rows.extend(bler_rows(&keys, &eval_bler(&t.system, &cfg)?.raw));
        run.log(format!("{label}: mean_max_abs {} (se {})", num(acf.mean_max_abs), num(acf.std_error)));
        series.push(Series::new(label, &cfg));
    }
    run.table("sweep.csv", &SWEEP_HEADER, rows, &series, json!({ "alphas": alphas }))?;
    run.finish()?;
    Ok(())
}
