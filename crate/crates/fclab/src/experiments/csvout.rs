//! CSV emission (UTF-8, header row, `.` decimal separator, 12-digit
//! scientific notation) with reproducible file names, and optional
//! gnuplot script emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::Real;

use super::ExperimentResult;

/// FNV-1a over the canonical configuration string; keeps file names
/// stable across runs and machines without timestamps.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn format_value(v: Real) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.12e}")
    }
}

/// Writes `<experiment>_<hash>.csv` into `dir` and returns the path.
pub fn write_csv(dir: &Path, result: &ExperimentResult, config_canon: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let hash = fnv1a(config_canon.as_bytes());
    let path = dir.join(format!("{}_{hash:016x}.csv", result.name));
    let mut out = String::new();
    out.push_str(&result.table.columns.join(","));
    out.push('\n');
    for row in &result.table.rows {
        let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    let mut f = fs::File::create(&path)?;
    f.write_all(out.as_bytes())?;
    Ok(path)
}

/// Emits a gnuplot script next to the CSV, referencing it by relative
/// file name; the tool itself never plots.
pub fn write_plot_script(dir: &Path, result: &ExperimentResult, csv_path: &Path) -> Result<PathBuf> {
    let csv_name = csv_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let path = dir.join(format!("{}.gp", result.name));
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set output '{}.png'\n", result.name));
    s.push_str("set terminal pngcairo size 1000,700\n");
    s.push_str("set key outside\n");
    s.push_str("set logscale x\n");
    s.push_str("set logscale y\n");
    s.push_str(&format!("set xlabel '{}'\n", result.table.columns[0]));
    s.push_str("plot \\\n");
    let plots: Vec<String> = result
        .table
        .columns
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| format!("  '{csv_name}' using 1:{} with linespoints title '{c}'", i + 1))
        .collect();
    s.push_str(&plots.join(", \\\n"));
    s.push('\n');
    let mut f = fs::File::create(&path)?;
    f.write_all(s.as_bytes())?;
    Ok(path)
}
