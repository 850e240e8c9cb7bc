// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Execution of experiment recipes over seeded, parallel trace ensembles.

use std::f64::consts::PI;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::{mean_nn_distance, Conformation, CouplingTensors};
use crate::dynamics::{ou_reference_trace, simulate_trace, Geometry, Hygiene, TimeTrace, TraceOptions};
use crate::error::{Error, Result};
use crate::perturbation::{alpha_dressed, dd_shifts, ground_manifold_frequencies, CgMode};
use crate::spectral::{
    average_spectra, extract_splitting_with, fit_spectrum_with, lf_fraction, psd, FitModel, FitOptions, FitResult,
    LfKind, Spectrum,
};

use super::config::{ExperimentConfig, GeometryKind, Recipe};

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trace `trace` at sweep point `point`; independent of scheduling.
pub fn trace_seed(master: u64, point: usize, trace: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ point as u64) ^ trace as u64)
}

/// Scalars derived at one sweep point. Frequencies are ordinary (Hz).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scalars {
    /// HWHM of the dominant fitted peak.
    pub hwhm_hz: Option<f64>,
    pub hwhm_sigma_hz: Option<f64>,
    pub center_hz: Option<f64>,
    /// Fitted peak separation, 0 when unresolved.
    pub two_delta_hz: Option<f64>,
    pub resolved: Option<bool>,
    pub lf_fraction: Option<f64>,
    pub lf_first_zero_hz: Option<f64>,
    /// Splitting of the ground-manifold lines from exact diagonalization.
    pub exact_splitting_hz: Option<f64>,
    /// 2δ from first-order perturbation theory with Clebsch–Gordan weights.
    pub perturbative_splitting_hz: Option<f64>,
    pub total_power: Option<f64>,
}

impl Scalars {
    /// Named scalar lookup used by report aggregation.
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "hwhm_hz" => self.hwhm_hz,
            "hwhm_sigma_hz" => self.hwhm_sigma_hz,
            "center_hz" => self.center_hz,
            "two_delta_hz" => self.two_delta_hz,
            "lf_fraction" => self.lf_fraction,
            "lf_first_zero_hz" => self.lf_first_zero_hz,
            "exact_splitting_hz" => self.exact_splitting_hz,
            "perturbative_splitting_hz" => self.perturbative_splitting_hz,
            "total_power" => self.total_power,
            _ => None,
        }
    }

    pub const NAMES: [&'static str; 9] = [
        "hwhm_hz",
        "hwhm_sigma_hz",
        "center_hz",
        "two_delta_hz",
        "lf_fraction",
        "lf_first_zero_hz",
        "exact_splitting_hz",
        "perturbative_splitting_hz",
        "total_power",
    ];
}

/// Outcome at one sweep value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub index: usize,
    pub sweep_value: f64,
    pub trace_seeds: Vec<u64>,
    /// Ensemble-averaged spectrum; persisted as CSV.
    #[serde(skip)]
    pub spectrum: Option<Spectrum>,
    pub fit: Option<FitResult>,
    pub scalars: Scalars,
    pub hygiene: Option<Hygiene>,
    /// Non-fatal conditions such as a failed fit.
    pub flags: Vec<String>,
    pub elapsed_s: f64,
    /// Raw traces, kept by the trace-dump recipe; persisted as CSV.
    #[serde(skip)]
    pub traces: Vec<TimeTrace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub recipe: Recipe,
    pub sweep_key: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub code_version: String,
    pub config: ExperimentConfig,
    pub points: Vec<PointResult>,
    /// Set when the run stopped early; `points` then holds the completed prefix.
    pub failure: Option<String>,
    pub elapsed_s: f64,
}

impl ResultSet {
    fn new(cfg: &ExperimentConfig) -> Self {
        ResultSet {
            recipe: cfg.recipe,
            sweep_key: cfg.sweep_key.clone(),
            config_hash: cfg.hash(),
            master_seed: cfg.master_seed,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            config: cfg.clone(),
            points: Vec::new(),
            failure: None,
            elapsed_s: 0.0,
        }
    }

    /// (sweep value, scalar) pairs for points where the scalar exists.
    pub fn series(&self, scalar: &str) -> Vec<(f64, f64)> {
        self.points.iter().filter_map(|p| p.scalars.get(scalar).map(|v| (p.sweep_value, v))).collect()
    }

    /// Merged integration hygiene over all points.
    pub fn hygiene(&self) -> Option<Hygiene> {
        let mut it = self.points.iter().filter_map(|p| p.hygiene.as_ref());
        let mut h = it.next()?.clone();
        for other in it {
            h.merge(other);
        }
        Some(h)
    }
}

/// Pair geometry of a point configuration.
pub fn geometry_of(cfg: &ExperimentConfig) -> Geometry {
    match cfg.geometry {
        GeometryKind::Dynamic => Geometry::Resampled { angles: cfg.angle_sampling },
        GeometryKind::Decoupled => Geometry::Decoupled,
        GeometryKind::Static => Geometry::Fixed { conformation: static_conformation(cfg) },
    }
}

/// Fixed conformation at `xi`, or at the typical nearest-neighbour distance of the density.
pub fn static_conformation(cfg: &ExperimentConfig) -> Conformation {
    let k0 = cfg.params.k0;
    match cfg.xi {
        Some(xi) => Conformation::from_xi(xi, cfg.theta, cfg.phi, k0),
        None => Conformation::new(mean_nn_distance(cfg.params.density_per_cm3), cfg.theta, cfg.phi, k0),
    }
}

fn trace_options(cfg: &ExperimentConfig) -> TraceOptions {
    TraceOptions {
        geometry: geometry_of(cfg),
        integrator: cfg.integrator,
        burn_in: cfg.burn_in,
        full_state: cfg.full_state,
        positivity_every: cfg.positivity_every,
    }
}

fn simulate_one(cfg: &ExperimentConfig, seed: u64) -> Result<TimeTrace> {
    if cfg.recipe == Recipe::OuCheck {
        let p = &cfg.params;
        ou_reference_trace(cfg.ou_gamma, cfg.ou_larmor, cfg.ou_amplitude, p.sample_interval, p.trace_duration, seed)
    } else {
        simulate_trace(&cfg.params, &trace_options(cfg), seed)
    }
}

/// Runs the ensemble of one point in parallel and returns traces in index order.
pub fn run_ensemble(cfg: &ExperimentConfig, point: usize) -> Result<Vec<TimeTrace>> {
    (0..cfg.ensemble).into_par_iter().map(|k| simulate_one(cfg, trace_seed(cfg.master_seed, point, k))).collect()
}

/// Averaged Welch spectrum of an ensemble.
pub fn ensemble_spectrum(cfg: &ExperimentConfig, traces: &[TimeTrace]) -> Result<Spectrum> {
    let spectra = traces
        .iter()
        .map(|t| psd(t, cfg.segment_samples.unwrap_or(t.samples.len()), cfg.window))
        .collect::<Result<Vec<_>>>()?;
    average_spectra(&spectra)
}

fn fit_options(cfg: &ExperimentConfig) -> FitOptions {
    FitOptions {
        band: cfg.fit_band_hz,
        tau_c_hint: (cfg.fit_model.lf == LfKind::Sinc).then_some(cfg.params.tau_c),
        ..FitOptions::default()
    }
}

/// Fits the spectrum with the configured model and fills the spectral scalars.
/// An unresolvable doublet falls back to a single peak with zero splitting and a flag.
pub fn analyze_spectrum(
    cfg: &ExperimentConfig,
    s: &Spectrum,
    scalars: &mut Scalars,
    flags: &mut Vec<String>,
) -> Result<FitResult> {
    let opts = fit_options(cfg);
    let fit = if cfg.fit_model.peaks == 2 {
        match extract_splitting_with(s, cfg.fit_model, &opts) {
            Ok(split) => {
                scalars.two_delta_hz = Some(split.two_delta / (2.0 * PI));
                scalars.resolved = Some(split.resolved);
                split.fit
            }
            Err(e) => {
                flags.push(format!("two-peak fit failed ({e}); single peak used"));
                let single = FitModel { peaks: 1, ..cfg.fit_model };
                let fit = fit_spectrum_with(s, single, &opts)?;
                scalars.two_delta_hz = Some(0.0);
                scalars.resolved = Some(false);
                fit
            }
        }
    } else {
        fit_spectrum_with(s, cfg.fit_model, &opts)?
    };
    let (peak, sigma) = dominant_with_sigma(&fit);
    scalars.hwhm_hz = Some(peak.gamma / (2.0 * PI));
    scalars.hwhm_sigma_hz = sigma.map(|g| g / (2.0 * PI));
    scalars.center_hz = Some(peak.center / (2.0 * PI));
    if let Some(lf) = &fit.lf {
        scalars.lf_fraction = Some(lf_fraction(s, &fit));
        scalars.lf_first_zero_hz = lf.first_zero_hz();
    }
    Ok(fit)
}

fn dominant_with_sigma(fit: &FitResult) -> (crate::spectral::Peak, Option<f64>) {
    let peak = fit.dominant_peak();
    let idx = fit.peaks.iter().position(|p| *p == peak);
    (peak, idx.and_then(|i| fit.peak_sigma.get(i)).map(|s| s.gamma))
}

/// Exact and perturbative splittings of the static conformation of `cfg`.
pub fn predicted_splittings(cfg: &ExperimentConfig, scalars: &mut Scalars, flags: &mut Vec<String>) -> Result<()> {
    let c = static_conformation(cfg);
    let p = &cfg.params;
    scalars.exact_splitting_hz = Some(ground_manifold_frequencies(p, Some(&c))?.splitting() / (2.0 * PI));
    let t = CouplingTensors::new(&c, p.gamma0)?;
    match dd_shifts(&t, alpha_dressed(p.omega_rabi, p.detuning), p.larmor, CgMode::WithCg) {
        Ok(s) => scalars.perturbative_splitting_hz = Some(2.0 * s.delta / (2.0 * PI)),
        Err(e @ Error::NonDiagonalCoupling(_)) => flags.push(format!("no perturbative prediction: {e}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn run_point(base: &ExperimentConfig, index: usize, value: f64) -> Result<PointResult> {
    let start = Instant::now();
    let cfg = if base.sweep_values.is_empty() { base.clone() } else { base.at(value)? };
    let mut scalars = Scalars::default();
    let mut flags = Vec::new();
    let mut result = PointResult {
        index,
        sweep_value: value,
        trace_seeds: Vec::new(),
        spectrum: None,
        fit: None,
        scalars: Scalars::default(),
        hygiene: None,
        flags: Vec::new(),
        elapsed_s: 0.0,
        traces: Vec::new(),
    };
    if cfg.geometry == GeometryKind::Static && cfg.recipe != Recipe::OuCheck {
        predicted_splittings(&cfg, &mut scalars, &mut flags)?;
    }
    if cfg.recipe != Recipe::PerturbationCheck {
        result.trace_seeds = (0..cfg.ensemble).map(|k| trace_seed(cfg.master_seed, index, k)).collect();
        let traces = run_ensemble(&cfg, index)?;
        // The classical OU reference has no density matrix to check.
        if cfg.recipe != Recipe::OuCheck {
            let mut hygiene = traces[0].hygiene.clone();
            for t in &traces[1..] {
                hygiene.merge(&t.hygiene);
            }
            if hygiene.negative_eigenvalue_events > 0 {
                flags.push(format!("positivity: min eigenvalue {:e}", hygiene.min_eigenvalue));
            }
            result.hygiene = Some(hygiene);
        }
        let spectrum = ensemble_spectrum(&cfg, &traces)?;
        scalars.total_power = Some(spectrum.total_power());
        match analyze_spectrum(&cfg, &spectrum, &mut scalars, &mut flags) {
            Ok(fit) => result.fit = Some(fit),
            Err(e) => {
                warn!("point {index}: fit failed: {e}");
                flags.push(format!("fit failed: {e}"));
            }
        }
        result.spectrum = Some(spectrum);
        if cfg.recipe == Recipe::TraceDump {
            result.traces = traces;
        }
    }
    result.scalars = scalars;
    result.flags = flags;
    result.elapsed_s = start.elapsed().as_secs_f64();
    info!("point {index} ({} = {value:e}) done in {:.1} s", cfg.sweep_key, result.elapsed_s);
    Ok(result)
}

/// Runs every sweep point in order. On failure the completed points are kept and the
/// error is returned alongside them, with the failing point identified.
pub fn run_points(cfg: &ExperimentConfig) -> (ResultSet, Option<Error>) {
    let start = Instant::now();
    let mut set = ResultSet::new(cfg);
    let mut error = None;
    for (index, value) in cfg.points().into_iter().enumerate() {
        match run_point(cfg, index, value) {
            Ok(p) => set.points.push(p),
            Err(e) => {
                let e = Error::SweepPoint { index, value, source: Box::new(e) };
                set.failure = Some(e.to_string());
                error = Some(e);
                break;
            }
        }
    }
    set.elapsed_s = start.elapsed().as_secs_f64();
    (set, error)
}

/// Executes the recipe of a validated configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultSet> {
    match run_points(cfg) {
        (set, None) => Ok(set),
        (_, Some(e)) => Err(e),
    }
}

/// As [`run_experiment`] on a dedicated pool of `threads` workers.
pub fn run_experiment_on(cfg: &ExperimentConfig, threads: usize) -> Result<ResultSet> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a = trace_seed(1, 0, 0);
        assert_eq!(a, trace_seed(1, 0, 0));
        assert_ne!(a, trace_seed(1, 0, 1));
        assert_ne!(a, trace_seed(1, 1, 0));
        assert_ne!(a, trace_seed(2, 0, 0));
        assert_ne!(trace_seed(0, 1, 0), trace_seed(0, 0, 1));
    }

    #[test]
    fn perturbation_check_needs_no_traces() {
        let cfg =
            ExperimentConfig::from_toml_str("recipe = \"perturbation-check\"\nsweep_values = [1e13, 1e14]").unwrap();
        let set = run_experiment(&cfg).unwrap();
        assert_eq!(set.points.len(), 2);
        let s = &set.points[1].scalars;
        let (e, p) = (s.exact_splitting_hz.unwrap(), s.perturbative_splitting_hz.unwrap());
        assert!((e - p).abs() < 0.1 * p, "{e} vs {p}");
        assert!(set.points[0].spectrum.is_none());
    }

    #[test]
    fn ou_check_recovers_parameters() {
        let cfg = ExperimentConfig::from_toml_str(
            "recipe = \"ou-check\"\nou_gamma_hz = 270e3\nou_larmor_hz = 9e6\nensemble = 8\ntrace_duration_s = 2e-4\n\
             segment_samples = 2000\nmaster_seed = 3",
        )
        .unwrap();
        let set = run_experiment(&cfg).unwrap();
        let s = &set.points[0].scalars;
        assert!((s.hwhm_hz.unwrap() / 270e3 - 1.0).abs() < 0.1, "{:?}", s.hwhm_hz);
        assert!((s.center_hz.unwrap() / 9e6 - 1.0).abs() < 0.01, "{:?}", s.center_hz);
    }

    #[test]
    fn failing_point_is_identified() {
        let cfg = ExperimentConfig::from_toml_str(
            "recipe = \"density-sweep\"\nsweep_values = [1e12, 2e12]\ntau_c_s = 1.05e-7\ntrace_duration_s = 1e-6",
        );
        // τ_c not a multiple of the sample interval fails at the first point.
        let cfg = cfg.unwrap();
        let (set, err) = run_points(&cfg);
        assert!(set.points.is_empty());
        match err {
            Some(Error::SweepPoint { index: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(set.failure.is_some());
    }
}
