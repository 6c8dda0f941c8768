//! Plot-ready CSV files, each with a JSON sidecar (`<stem>.json`) carrying
//! the configuration and seed that produced it.

use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::Serialize;

use super::{AcfReport, BlerCurve, DistStats};
use crate::error::Result;
use crate::Scalar;

pub const ACF_HEADER: [&str; 2] = ["lag", "abs_acf"];
pub const BLER_HEADER: [&str; 5] = ["ebno_db", "blocks", "errors", "bler", "ci95"];
pub const CONSTELLATION_HEADER: [&str; 2] = ["re", "im"];
pub const DIST_HEADER: [&str; 2] = ["stat", "value"];

pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_sidecar<M: Serialize + ?Sized>(csv_path: &Path, meta: &M) -> Result<PathBuf> {
    let path = sidecar_path(csv_path);
    let mut text = serde_json::to_string_pretty(meta)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

pub fn write_acf_csv(path: &Path, report: &AcfReport) -> Result<()> {
    write_csv(path, &ACF_HEADER, report.per_lag.iter().enumerate().map(|(i, v)| [(i + 1).to_string(), v.to_string()]))
}

/// Several curves go in one file; the curve label is not a column, so the
/// caller keeps one file per curve or records the order in the sidecar.
pub fn write_bler_csv(path: &Path, curve: &BlerCurve) -> Result<()> {
    write_csv(
        path,
        &BLER_HEADER,
        curve.points.iter().map(|p| {
            [p.ebno_db.to_string(), p.blocks.to_string(), p.errors.to_string(), p.bler.to_string(), p.ci95.to_string()]
        }),
    )
}

pub fn write_constellation_csv<T: Scalar>(path: &Path, points: &[Complex<T>]) -> Result<()> {
    write_csv(path, &CONSTELLATION_HEADER, points.iter().map(|c| [c.re.to_string(), c.im.to_string()]))
}

pub fn write_dist_csv(path: &Path, stats: &DistStats) -> Result<()> {
    let rows = [
        ("samples", stats.samples as f64),
        ("mean", stats.mean),
        ("variance", stats.variance),
        ("excess_kurtosis", stats.excess_kurtosis),
        ("ks", stats.ks),
        ("target_variance", stats.target_variance),
    ];
    write_csv(path, &DIST_HEADER, rows.iter().map(|(k, v)| [k.to_string(), v.to_string()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::BlerPoint;

    #[test]
    fn files_have_expected_headers_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let acf = AcfReport { per_lag: vec![0.5, 0.25], max_abs: 0.5, runs: 1, mean_max_abs: 0.5, std_error: 0.0 };
        let p = dir.path().join("acf.csv");
        write_acf_csv(&p, &acf).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "lag,abs_acf\n1,0.5\n2,0.25\n");

        let curve = BlerCurve { label: "x".into(), points: vec![BlerPoint::new(0.0, 10, 0)] };
        let p = dir.path().join("sub/bler.csv");
        write_bler_csv(&p, &curve).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("ebno_db,blocks,errors,bler,ci95\n0,10,0,0,"));

        let p = dir.path().join("c.csv");
        write_constellation_csv(&p, &[Complex::new(1.0f64, -0.5)]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "re,im\n1,-0.5\n");

        let side = write_sidecar(&p, &serde_json::json!({"seed": 7})).unwrap();
        assert_eq!(side, dir.path().join("c.json"));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
        assert_eq!(v["seed"], 7);
    }

    #[test]
    fn dist_csv_lists_stats() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        let s = crate::analysis::distribution_stats(&[1.0f64, -1.0], 1.0).unwrap();
        write_dist_csv(&p, &s).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("stat,value\nsamples,2\nmean,0\n"));
        assert!(text.contains("\nks,"));
    }
}
