//! Run directories. Every CSV gets a JSON sidecar naming the command, seed
//! and the resolved configuration of each series in it; `<command>.log`
//! lists the same facts plus what was written. Nothing here records time or host, so
//! reruns are byte-identical.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use featherlink::analysis::report::{write_csv, write_sidecar};
use serde::Serialize;

use crate::config::ExperimentConfig;

pub const CLI_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One labelled configuration contributing rows to a table.
#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub label: String,
    pub config: ExperimentConfig,
}

impl Series {
    pub fn new(label: impl Into<String>, config: &ExperimentConfig) -> Self {
        Self { label: label.into(), config: config.clone() }
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    cli_version: &'static str,
    core_version: &'static str,
    command: &'a str,
    seed: u64,
    file: &'a str,
    columns: &'a [&'a str],
    series: &'a [Series],
    summary: &'a serde_json::Value,
}

pub struct RunDir {
    root: PathBuf,
    command: String,
    seed: u64,
    lines: Vec<String>,
}

impl RunDir {
    pub fn create(root: &Path, command: &str, seed: u64) -> Result<Self> {
        std::fs::create_dir_all(root).with_context(|| format!("cannot create output directory {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), command: command.to_string(), seed, lines: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn join(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// Appends to the run log and echoes to stderr.
    pub fn log(&mut self, line: impl Into<String>) {
        let line = line.into();
        eprintln!("{line}");
        self.lines.push(line);
    }

    pub fn table(
        &mut self,
        name: &str,
        header: &[&str],
        rows: Vec<Vec<String>>,
        series: &[Series],
        summary: serde_json::Value,
    ) -> Result<PathBuf> {
        let path = self.join(name);
        write_csv(&path, header, rows).with_context(|| format!("writing {}", path.display()))?;
        let meta = Sidecar {
            tool: "featherlink",
            cli_version: CLI_VERSION,
            core_version: featherlink::VERSION,
            command: &self.command,
            seed: self.seed,
            file: name,
            columns: header,
            series,
            summary: &summary,
        };
        write_sidecar(&path, &meta).with_context(|| format!("writing sidecar for {}", path.display()))?;
        self.log(format!("wrote {name}"));
        Ok(path)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.join(name);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.log(format!("wrote {name}"));
        Ok(path)
    }

    pub fn finish(self) -> Result<PathBuf> {
        let mut text = format!(
            "featherlink-cli {CLI_VERSION} (featherlink {})\ncommand: {}\nseed: {}\n",
            featherlink::VERSION,
            self.command,
            self.seed
        );
        for line in &self.lines {
            text.push_str(line);
            text.push('\n');
        }
        let name = self.command.split_whitespace().next().unwrap_or("run");
        let path = self.root.join(format!("{name}.log"));
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// Shortest round-trip decimal form, as used in every table.
pub fn num(v: f64) -> String {
    v.to_string()
}
