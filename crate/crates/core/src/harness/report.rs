// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Plot-ready aggregation of stored result sets. No physics is recomputed here.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::results::read_results;
use super::run::{ResultSet, Scalars};

/// File name of the two-column CSV of one scalar against the sweep axis.
pub fn series_file(sweep_key: &str, scalar: &str) -> String {
    format!("{sweep_key}_vs_{scalar}.csv")
}

/// Wide table of every scalar per sweep point.
pub fn summary_csv(set: &ResultSet) -> String {
    let mut out = format!("{},{}\n", set.sweep_key, Scalars::NAMES.join(","));
    for p in &set.points {
        let cols: Vec<String> =
            Scalars::NAMES.iter().map(|n| p.scalars.get(n).map(|v| v.to_string()).unwrap_or_default()).collect();
        out.push_str(&format!("{},{}\n", p.sweep_value, cols.join(",")));
    }
    out
}

/// Two-column CSV of one scalar; `None` when no point carries it.
pub fn series_csv(set: &ResultSet, scalar: &str) -> Option<String> {
    let series = set.series(scalar);
    if series.is_empty() {
        return None;
    }
    let mut out = format!("{},{scalar}\n", set.sweep_key);
    for (x, y) in series {
        out.push_str(&format!("{x},{y}\n"));
    }
    Some(out)
}

/// Writes `summary.csv` and one `<axis>_vs_<scalar>.csv` per available scalar into `out`.
/// Returns the written paths.
pub fn write_report(set: &ResultSet, out: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut written = Vec::new();
    let summary = out.join("summary.csv");
    fs::write(&summary, summary_csv(set)).map_err(|e| Error::io(&summary, e))?;
    written.push(summary);
    for name in Scalars::NAMES {
        if let Some(text) = series_csv(set, name) {
            let path = out.join(series_file(&set.sweep_key, name));
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Reads a result directory and writes its report to `out` (default: the same directory).
pub fn report(dir: &Path, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let set = read_results(dir)?;
    write_report(&set, out.unwrap_or(dir))
}
