// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Persistence of result sets: `results.json` for fits and scalars, CSV for spectra and
//! traces, and a CSV event log of conformation switches next to each trace.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::coupling::Conformation;
use crate::dynamics::{ConformationEvent, Hygiene, TimeTrace, TraceMode};
use crate::error::{Error, Result};
use crate::spectral::Spectrum;

use super::config::{GeometryKind, Recipe};
use super::run::ResultSet;

pub const RESULTS_FILE: &str = "results.json";

pub fn spectrum_file(index: usize) -> String {
    format!("spectrum_{index:03}.csv")
}

pub fn trace_file(index: usize, k: usize) -> String {
    format!("trace_{index:03}_{k:03}.csv")
}

pub fn events_file(index: usize, k: usize) -> String {
    format!("trace_{index:03}_{k:03}.events.csv")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Format { context: path.to_path_buf(), message: e.to_string() }
}

fn write_header(w: &mut impl Write, path: &Path, pairs: &[(&str, String)]) -> Result<()> {
    for (k, v) in pairs {
        writeln!(w, "# {k} = {v}").map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// `# key = value` lines at the top of a CSV file.
fn read_header(path: &Path) -> Result<Vec<(String, String)>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let Some(rest) = line.strip_prefix('#') else { break };
        if let Some((k, v)) = rest.split_once('=') {
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    Ok(out)
}

fn header_value<T: std::str::FromStr>(path: &Path, header: &[(String, String)], key: &str) -> Result<T> {
    header.iter().find(|(k, _)| k == key).and_then(|(_, v)| v.parse().ok()).ok_or_else(|| Error::Format {
        context: path.to_path_buf(),
        message: format!("missing or invalid `{key}` header"),
    })
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).map_err(|e| csv_err(path, e))
}

fn parse_f64(path: &Path, s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Format { context: path.to_path_buf(), message: format!("not a number: `{s}`") })
}

pub fn write_spectrum(path: &Path, s: &Spectrum, header: &[(&str, String)]) -> Result<()> {
    let mut w = create(path)?;
    let mut pairs = vec![("resolution_hz", s.resolution.to_string()), ("n_averages", s.n_averages.to_string())];
    pairs.extend(header.iter().cloned());
    write_header(&mut w, path, &pairs)?;
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["freq_hz", "psd"]).map_err(|e| csv_err(path, e))?;
    for (f, p) in s.freqs.iter().zip(&s.psd) {
        c.write_record([f.to_string(), p.to_string()]).map_err(|e| csv_err(path, e))?;
    }
    c.flush().map_err(|e| Error::io(path, e))
}

pub fn read_spectrum(path: &Path) -> Result<Spectrum> {
    let header = read_header(path)?;
    let resolution = header_value(path, &header, "resolution_hz")?;
    let n_averages = header_value(path, &header, "n_averages")?;
    let (mut freqs, mut psd) = (Vec::new(), Vec::new());
    for rec in reader(path)?.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        freqs.push(parse_f64(path, &rec[0])?);
        psd.push(parse_f64(path, &rec[1])?);
    }
    Ok(Spectrum { freqs, psd, resolution, n_averages })
}

pub fn write_trace(path: &Path, events_path: &Path, t: &TimeTrace, header: &[(&str, String)]) -> Result<()> {
    let mut w = create(path)?;
    let mut pairs = vec![("seed", t.seed.to_string()), ("dt_s", t.dt.to_string())];
    pairs.extend(header.iter().cloned());
    write_header(&mut w, path, &pairs)?;
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["t_s", "sz"]).map_err(|e| csv_err(path, e))?;
    for (time, sz) in t.times().zip(&t.samples) {
        c.write_record([time.to_string(), sz.to_string()]).map_err(|e| csv_err(path, e))?;
    }
    c.flush().map_err(|e| Error::io(path, e))?;

    let mut c = csv::Writer::from_writer(create(events_path)?);
    c.write_record(["time_s", "r_m", "theta_rad", "phi_rad", "k0_per_m", "steady_sz"])
        .map_err(|e| csv_err(events_path, e))?;
    for ev in &t.conformation_log {
        let c0 = &ev.conformation;
        let sz = ev.steady_sz.map(|v| v.to_string()).unwrap_or_default();
        c.write_record([
            ev.time.to_string(),
            c0.r.to_string(),
            c0.theta.to_string(),
            c0.phi.to_string(),
            c0.k0.to_string(),
            sz,
        ])
        .map_err(|e| csv_err(events_path, e))?;
    }
    c.flush().map_err(|e| Error::io(events_path, e))
}

pub fn read_trace(path: &Path, events_path: &Path, mode: TraceMode) -> Result<TimeTrace> {
    let header = read_header(path)?;
    let seed = header_value(path, &header, "seed")?;
    let dt = header_value(path, &header, "dt_s")?;
    let mut samples = Vec::new();
    for rec in reader(path)?.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        samples.push(parse_f64(path, &rec[1])?);
    }
    let mut conformation_log = Vec::new();
    if events_path.exists() {
        for rec in reader(events_path)?.records() {
            let rec = rec.map_err(|e| csv_err(events_path, e))?;
            let v = |i: usize| parse_f64(events_path, &rec[i]);
            let steady_sz = if rec[5].trim().is_empty() { None } else { Some(v(5)?) };
            conformation_log.push(ConformationEvent {
                time: v(0)?,
                conformation: Conformation::new(v(1)?, v(2)?, v(3)?, v(4)?),
                steady_sz,
            });
        }
    }
    Ok(TimeTrace { dt, samples, conformation_log, seed, mode, hygiene: Hygiene::default() })
}

/// Writes `results.json` plus one spectrum CSV per point and the traces of trace-dump runs.
pub fn write_results(set: &ResultSet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json = dir.join(RESULTS_FILE);
    let text = serde_json::to_string_pretty(set)
        .map_err(|e| Error::Format { context: json.clone(), message: e.to_string() })?;
    fs::write(&json, text).map_err(|e| Error::io(&json, e))?;
    for p in &set.points {
        let prov = [
            ("seed", set.master_seed.to_string()),
            ("config_hash", set.config_hash.clone()),
            ("sweep_value", p.sweep_value.to_string()),
        ];
        if let Some(s) = &p.spectrum {
            write_spectrum(&dir.join(spectrum_file(p.index)), s, &prov)?;
        }
        for (k, t) in p.traces.iter().enumerate() {
            write_trace(&dir.join(trace_file(p.index, k)), &dir.join(events_file(p.index, k)), t, &prov[1..])?;
        }
    }
    Ok(())
}

fn trace_mode(set: &ResultSet) -> TraceMode {
    match (set.recipe, set.config.geometry) {
        (Recipe::OuCheck, _) => TraceMode::OuReference,
        (_, GeometryKind::Dynamic) => TraceMode::Dynamic,
        _ => TraceMode::Static,
    }
}

/// Reads a directory written by [`write_results`].
pub fn read_results(dir: &Path) -> Result<ResultSet> {
    let json = dir.join(RESULTS_FILE);
    let text = fs::read_to_string(&json).map_err(|e| Error::io(&json, e))?;
    let mut set: ResultSet =
        serde_json::from_str(&text).map_err(|e| Error::Format { context: json.clone(), message: e.to_string() })?;
    set.config.output_dir = dir.to_path_buf();
    let mode = trace_mode(&set);
    for p in &mut set.points {
        let sp = dir.join(spectrum_file(p.index));
        if sp.exists() {
            p.spectrum = Some(read_spectrum(&sp)?);
        }
        for k in 0.. {
            let tp: PathBuf = dir.join(trace_file(p.index, k));
            if !tp.exists() {
                break;
            }
            p.traces.push(read_trace(&tp, &dir.join(events_file(p.index, k)), mode)?);
        }
    }
    Ok(set)
}
