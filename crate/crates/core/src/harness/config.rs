// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Flat key-value experiment configuration with units in the key names.
//!
//! Rates are given as ordinary frequencies (`*_hz`) and converted to rad/s here.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::coupling::AngleSampling;
use crate::dynamics::Integrator;
use crate::error::{Error, Result};
use crate::qcore::SimulationParams;
use crate::spectral::{FitModel, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    StaticDistanceSweep,
    AngleSweep,
    DensitySweep,
    PowerSweep,
    TraceDump,
    LfTail,
    OuCheck,
    PerturbationCheck,
}

impl Recipe {
    pub const ALL: [Recipe; 8] = [
        Recipe::StaticDistanceSweep,
        Recipe::AngleSweep,
        Recipe::DensitySweep,
        Recipe::PowerSweep,
        Recipe::TraceDump,
        Recipe::LfTail,
        Recipe::OuCheck,
        Recipe::PerturbationCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Recipe::StaticDistanceSweep => "static-distance-sweep",
            Recipe::AngleSweep => "angle-sweep",
            Recipe::DensitySweep => "density-sweep",
            Recipe::PowerSweep => "power-sweep",
            Recipe::TraceDump => "trace-dump",
            Recipe::LfTail => "lf-tail",
            Recipe::OuCheck => "ou-check",
            Recipe::PerturbationCheck => "perturbation-check",
        }
    }

    /// Key varied along the sweep unless `sweep_key` says otherwise.
    pub fn default_sweep_key(self) -> &'static str {
        match self {
            Recipe::StaticDistanceSweep => "xi",
            Recipe::AngleSweep => "theta_rad",
            Recipe::PowerSweep => "omega_rabi_hz",
            Recipe::OuCheck => "ou_gamma_hz",
            _ => "density_per_cm3",
        }
    }

    /// Whether `sweep_values` must be given.
    pub fn requires_sweep(self) -> bool {
        !matches!(self, Recipe::TraceDump | Recipe::OuCheck)
    }

    /// Default pair geometry during the traces.
    fn default_geometry(self) -> GeometryKind {
        match self {
            Recipe::StaticDistanceSweep | Recipe::AngleSweep | Recipe::PerturbationCheck => GeometryKind::Static,
            _ => GeometryKind::Dynamic,
        }
    }

    fn default_fit_model(self) -> FitModel {
        match self {
            Recipe::StaticDistanceSweep | Recipe::AngleSweep | Recipe::PerturbationCheck => FitModel::two_peak(),
            Recipe::OuCheck => FitModel::single_peak(),
            _ => FitModel::sinc_lf(),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Recipe::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Recipe::ALL.iter().map(|r| r.name()).collect();
            Error::Config(format!("unknown recipe `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    /// Conformation resampled every τ_c from nearest-neighbour statistics.
    Dynamic,
    /// Fixed conformation at `xi` (or at the typical distance of the density) and (θ, φ).
    Static,
    /// No coupling.
    Decoupled,
}

/// Validated experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub recipe: Recipe,
    pub params: SimulationParams,
    pub sweep_key: String,
    pub sweep_values: Vec<f64>,
    pub ensemble: usize,
    pub master_seed: u64,
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub geometry: GeometryKind,
    pub angle_sampling: AngleSampling,
    /// Fixed k₀r of a static geometry; `None` uses the typical distance at the density.
    pub xi: Option<f64>,
    pub theta: f64,
    pub phi: f64,
    pub integrator: Integrator,
    pub burn_in: f64,
    pub full_state: bool,
    pub positivity_every: usize,
    /// Welch segment length in samples; `None` uses whole traces.
    pub segment_samples: Option<usize>,
    pub window: Window,
    pub fit_model: FitModel,
    pub fit_band_hz: Option<(f64, f64)>,
    /// OU reference damping and precession (rad/s).
    pub ou_gamma: f64,
    pub ou_larmor: f64,
    pub ou_amplitude: f64,
    /// Flat table after overrides, used to derive sweep points.
    #[serde(skip)]
    table: Table,
}

pub const KNOWN_KEYS: [&str; 34] = [
    "recipe",
    "omega_rabi_hz",
    "detuning_hz",
    "larmor_hz",
    "gamma0_hz",
    "gamma_t_hz",
    "polarization",
    "noise_amplitude",
    "dt_s",
    "sample_interval_s",
    "trace_duration_s",
    "tau_c_s",
    "density_per_cm3",
    "wavelength_m",
    "sweep_key",
    "sweep_values",
    "ensemble",
    "master_seed",
    "output_dir",
    "geometry",
    "angle_sampling",
    "xi",
    "theta_rad",
    "phi_rad",
    "integrator",
    "burn_in_s",
    "full_state",
    "positivity_every",
    "segment_samples",
    "window",
    "fit_model",
    "fit_band_hz",
    "ou_gamma_hz",
    "ou_larmor_hz",
];

const EXTRA_KEYS: [&str; 1] = ["ou_amplitude"];

/// Keys that may be swept: scalar numeric physics or geometry settings.
pub const SWEEPABLE_KEYS: [&str; 17] = [
    "omega_rabi_hz",
    "detuning_hz",
    "larmor_hz",
    "gamma0_hz",
    "gamma_t_hz",
    "noise_amplitude",
    "dt_s",
    "sample_interval_s",
    "trace_duration_s",
    "tau_c_s",
    "density_per_cm3",
    "wavelength_m",
    "xi",
    "theta_rad",
    "phi_rad",
    "ou_gamma_hz",
    "ou_larmor_hz",
];

fn is_known(key: &str) -> bool {
    KNOWN_KEYS.contains(&key) || EXTRA_KEYS.contains(&key)
}

fn type_error(key: &str, expected: &str, v: &Value) -> Error {
    Error::Config(format!("`{key}` must be {expected}, got {v}"))
}

fn get_f64(t: &Table, key: &str) -> Result<Option<f64>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Float(x)) => Ok(Some(*x)),
        Some(Value::Integer(i)) => Ok(Some(*i as f64)),
        Some(v) => Err(type_error(key, "a number", v)),
    }
}

fn get_str<'a>(t: &'a Table, key: &str) -> Result<Option<&'a str>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(v) => Err(type_error(key, "a string", v)),
    }
}

fn get_bool(t: &Table, key: &str) -> Result<Option<bool>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Boolean(b)) => Ok(Some(*b)),
        Some(v) => Err(type_error(key, "a boolean", v)),
    }
}

fn get_count(t: &Table, key: &str) -> Result<Option<u64>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
        Some(v) => Err(type_error(key, "a non-negative integer", v)),
    }
}

fn get_list(t: &Table, key: &str) -> Result<Option<Vec<f64>>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::Float(x) => Ok(*x),
                Value::Integer(i) => Ok(*i as f64),
                other => Err(type_error(key, "a list of numbers", other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(v) => Err(type_error(key, "a list of numbers", v)),
    }
}

fn finite(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("`{key}` must be finite, got {v}")))
    }
}

fn hz(t: &Table, key: &str, default: f64) -> Result<f64> {
    Ok(2.0 * PI * finite(key, get_f64(t, key)?.unwrap_or(default / (2.0 * PI)))?)
}

fn parse_angle_sampling(s: &str) -> Result<AngleSampling> {
    match s {
        "uniform" => Ok(AngleSampling::Uniform),
        "isotropic" => Ok(AngleSampling::Isotropic),
        other => Err(Error::Config(format!("`angle_sampling` must be uniform or isotropic, got `{other}`"))),
    }
}

fn parse_geometry(s: &str) -> Result<GeometryKind> {
    match s {
        "dynamic" => Ok(GeometryKind::Dynamic),
        "static" => Ok(GeometryKind::Static),
        "decoupled" => Ok(GeometryKind::Decoupled),
        other => Err(Error::Config(format!("`geometry` must be dynamic, static or decoupled, got `{other}`"))),
    }
}

fn parse_integrator(s: &str) -> Result<Integrator> {
    match s {
        "exponential" => Ok(Integrator::Exponential),
        "rk4" => Ok(Integrator::Rk4),
        other => Err(Error::Config(format!("`integrator` must be exponential or rk4, got `{other}`"))),
    }
}

fn parse_window(s: &str) -> Result<Window> {
    match s {
        "hann" => Ok(Window::Hann),
        "rectangular" => Ok(Window::Rectangular),
        other => Err(Error::Config(format!("`window` must be hann or rectangular, got `{other}`"))),
    }
}

/// Parses the value half of a `key=value` override: TOML syntax, else a bare string.
pub fn parse_override_value(raw: &str) -> Value {
    let raw = raw.trim();
    match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

/// Splits `key=value`.
pub fn parse_override(s: &str) -> Result<(String, Value)> {
    let (k, v) =
        s.split_once('=').ok_or_else(|| Error::Config(format!("override `{s}` is not of the form key=value")))?;
    let k = k.trim();
    if !is_known(k) {
        return Err(Error::Config(format!("override of unknown key `{k}`")));
    }
    Ok((k.to_string(), parse_override_value(v)))
}

impl ExperimentConfig {
    /// Reads a config file and applies `key=value` overrides.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut table: Table =
            text.parse().map_err(|e: toml::de::Error| Error::Config(format!("{}: {}", path.display(), e.message())))?;
        for o in overrides {
            let (k, v) = parse_override(o)?;
            table.insert(k, v);
        }
        Self::from_table(table)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        Self::from_table(table)
    }

    pub fn from_table(table: Table) -> Result<Self> {
        Self::parse(table, true)
    }

    fn parse(table: Table, require_sweep: bool) -> Result<Self> {
        if let Some(k) = table.keys().find(|k| !is_known(k)) {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }
        let recipe: Recipe = get_str(&table, "recipe")?.ok_or_else(|| Error::MissingField("recipe".into()))?.parse()?;

        let d = SimulationParams::default();
        let mut params = SimulationParams {
            omega_rabi: hz(&table, "omega_rabi_hz", d.omega_rabi)?,
            detuning: hz(&table, "detuning_hz", d.detuning)?,
            larmor: hz(&table, "larmor_hz", d.larmor)?,
            gamma0: hz(&table, "gamma0_hz", d.gamma0)?,
            gamma_t: hz(&table, "gamma_t_hz", d.gamma_t)?,
            polarization: match get_str(&table, "polarization")? {
                Some(s) => s.parse()?,
                None => d.polarization,
            },
            noise_amplitude: get_f64(&table, "noise_amplitude")?.unwrap_or(d.noise_amplitude),
            dt: 0.0,
            sample_interval: get_f64(&table, "sample_interval_s")?.unwrap_or(d.sample_interval),
            trace_duration: get_f64(&table, "trace_duration_s")?.unwrap_or(d.trace_duration),
            tau_c: get_f64(&table, "tau_c_s")?.unwrap_or(d.tau_c),
            density_per_cm3: get_f64(&table, "density_per_cm3")?.unwrap_or(d.density_per_cm3),
            k0: match get_f64(&table, "wavelength_m")? {
                Some(l) if l > 0.0 => 2.0 * PI / l,
                Some(l) => return Err(Error::Config(format!("`wavelength_m` must be > 0, got {l}"))),
                None => d.k0,
            },
        };
        params.dt = match get_f64(&table, "dt_s")? {
            Some(dt) => dt,
            None => params.default_dt(0.0),
        };
        params.validate()?;

        let sweep_key = get_str(&table, "sweep_key")?.unwrap_or(recipe.default_sweep_key()).to_string();
        if !SWEEPABLE_KEYS.contains(&sweep_key.as_str()) {
            return Err(Error::Config(format!("`sweep_key` = `{sweep_key}` is not a sweepable numeric key")));
        }
        let sweep_values = match get_list(&table, "sweep_values")? {
            Some(v) => v,
            None if require_sweep && recipe.requires_sweep() => return Err(Error::MissingField("sweep_values".into())),
            None => Vec::new(),
        };
        check_monotone(&sweep_values)?;

        let ensemble = get_count(&table, "ensemble")?.unwrap_or(1) as usize;
        if ensemble < 1 {
            return Err(Error::Config("`ensemble` must be at least 1".into()));
        }
        let ou_gamma_hz = get_f64(&table, "ou_gamma_hz")?;
        if recipe == Recipe::OuCheck && ou_gamma_hz.is_none() {
            return Err(Error::MissingField("ou_gamma_hz".into()));
        }
        let fit_band_hz = match get_list(&table, "fit_band_hz")? {
            Some(v) if v.len() == 2 && v[0] < v[1] => Some((v[0], v[1])),
            Some(_) => return Err(Error::Config("`fit_band_hz` must be [low, high] with low < high".into())),
            None => None,
        };
        let segment_samples = get_count(&table, "segment_samples")?.map(|n| n as usize);
        if segment_samples.is_some_and(|n| n < 2) {
            return Err(Error::Config("`segment_samples` must be at least 2".into()));
        }
        let xi = get_f64(&table, "xi")?;
        if xi.is_some_and(|x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::Config("`xi` must be finite and > 0".into()));
        }

        let cfg = ExperimentConfig {
            recipe,
            sweep_key,
            sweep_values,
            ensemble,
            master_seed: get_count(&table, "master_seed")?.unwrap_or(0),
            output_dir: PathBuf::from(get_str(&table, "output_dir")?.unwrap_or("results")),
            geometry: match get_str(&table, "geometry")? {
                Some(s) => parse_geometry(s)?,
                None => recipe.default_geometry(),
            },
            angle_sampling: match get_str(&table, "angle_sampling")? {
                Some(s) => parse_angle_sampling(s)?,
                None => AngleSampling::default(),
            },
            xi,
            theta: finite("theta_rad", get_f64(&table, "theta_rad")?.unwrap_or(0.0))?,
            phi: finite("phi_rad", get_f64(&table, "phi_rad")?.unwrap_or(0.0))?,
            integrator: match get_str(&table, "integrator")? {
                Some(s) => parse_integrator(s)?,
                None => Integrator::default(),
            },
            burn_in: get_f64(&table, "burn_in_s")?.unwrap_or(0.0).max(0.0),
            full_state: get_bool(&table, "full_state")?.unwrap_or(false),
            positivity_every: get_count(&table, "positivity_every")?.unwrap_or(0) as usize,
            segment_samples,
            window: match get_str(&table, "window")? {
                Some(s) => parse_window(s)?,
                None => Window::default(),
            },
            fit_model: match get_str(&table, "fit_model")? {
                Some(s) => s.parse()?,
                None => recipe.default_fit_model(),
            },
            fit_band_hz,
            ou_gamma: 2.0 * PI * finite("ou_gamma_hz", ou_gamma_hz.unwrap_or(270e3))?,
            ou_larmor: match get_f64(&table, "ou_larmor_hz")? {
                Some(f) => 2.0 * PI * finite("ou_larmor_hz", f)?,
                None => params.larmor,
            },
            ou_amplitude: get_f64(&table, "ou_amplitude")?.unwrap_or(1.0),
            params,
            table,
        };
        if let Some(&v) = cfg.sweep_values.first() {
            cfg.at(v).map_err(|e| Error::Config(format!("sweep point {}: {e}", v)))?;
        }
        Ok(cfg)
    }

    /// Configuration of one sweep point: `sweep_key` set to `value`, sweep removed.
    pub fn at(&self, value: f64) -> Result<ExperimentConfig> {
        let mut t = self.table.clone();
        t.insert(self.sweep_key.clone(), Value::Float(value));
        t.remove("sweep_values");
        let mut cfg = Self::parse(t, false)?;
        cfg.output_dir = self.output_dir.clone();
        Ok(cfg)
    }

    /// Values of the sweep; a single point at the configured value when there is no sweep.
    pub fn points(&self) -> Vec<f64> {
        if self.sweep_values.is_empty() {
            vec![self.current_sweep_value()]
        } else {
            self.sweep_values.clone()
        }
    }

    /// Value of `sweep_key` in this configuration, in the key's own units.
    pub fn current_sweep_value(&self) -> f64 {
        let p = &self.params;
        let two_pi = 2.0 * PI;
        match self.sweep_key.as_str() {
            "omega_rabi_hz" => p.omega_rabi / two_pi,
            "detuning_hz" => p.detuning / two_pi,
            "larmor_hz" => p.larmor / two_pi,
            "gamma0_hz" => p.gamma0 / two_pi,
            "gamma_t_hz" => p.gamma_t / two_pi,
            "noise_amplitude" => p.noise_amplitude,
            "dt_s" => p.dt,
            "sample_interval_s" => p.sample_interval,
            "trace_duration_s" => p.trace_duration,
            "tau_c_s" => p.tau_c,
            "density_per_cm3" => p.density_per_cm3,
            "wavelength_m" => two_pi / p.k0,
            "xi" => self.xi.unwrap_or(f64::NAN),
            "theta_rad" => self.theta,
            "phi_rad" => self.phi,
            "ou_gamma_hz" => self.ou_gamma / two_pi,
            "ou_larmor_hz" => self.ou_larmor / two_pi,
            _ => f64::NAN,
        }
    }

    /// Sets a key as if it had been given with `--override`.
    pub fn with_override(&self, key: &str, value: Value) -> Result<ExperimentConfig> {
        if !is_known(key) {
            return Err(Error::Config(format!("override of unknown key `{key}`")));
        }
        let mut t = self.table.clone();
        t.insert(key.to_string(), value);
        let mut cfg = Self::from_table(t)?;
        cfg.output_dir = if key == "output_dir" { cfg.output_dir } else { self.output_dir.clone() };
        Ok(cfg)
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    /// SHA-256 of the resolved configuration in canonical (key-sorted) JSON.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let canonical = serde_json::to_string(&value).expect("json value serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn check_monotone(v: &[f64]) -> Result<()> {
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(Error::Config(format!("`sweep_values` must be finite, got {x}")));
    }
    let up = v.windows(2).all(|w| w[1] > w[0]);
    let down = v.windows(2).all(|w| w[1] < w[0]);
    if up || down {
        Ok(())
    } else {
        Err(Error::Config("`sweep_values` must be strictly monotone".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
recipe = "density-sweep"
sweep_values = [1e12, 1e13, 1e14]
ensemble = 4
master_seed = 7
"#;

    #[test]
    fn parses_units() {
        let cfg = ExperimentConfig::from_toml_str(&format!("{BASE}\nlarmor_hz = 5e6\ntau_c_s = 2e-7")).unwrap();
        assert_eq!(cfg.recipe, Recipe::DensitySweep);
        assert!((cfg.params.larmor - 2.0 * PI * 5e6).abs() < 1e-6);
        assert_eq!(cfg.params.tau_c, 2e-7);
        assert_eq!(cfg.sweep_key, "density_per_cm3");
        assert_eq!(cfg.ensemble, 4);
    }

    #[test]
    fn missing_recipe_and_sweep() {
        match ExperimentConfig::from_toml_str("ensemble = 3") {
            Err(Error::MissingField(f)) => assert_eq!(f, "recipe"),
            other => panic!("{other:?}"),
        }
        match ExperimentConfig::from_toml_str("recipe = \"angle-sweep\"") {
            Err(Error::MissingField(f)) => assert_eq!(f, "sweep_values"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::from_toml_str(&format!("{BASE}\nlarmor = 3.0")).is_err());
        assert!(ExperimentConfig::from_toml_str("recipe = \"lf-tail\"\nsweep_values = [1.0, 3.0, 2.0]").is_err());
        assert!(ExperimentConfig::from_toml_str(&format!("{BASE}\nensemble_x = 0")).is_err());
        assert!(ExperimentConfig::from_toml_str("recipe = \"trace-dump\"\nensemble = 0").is_err());
        assert!(ExperimentConfig::from_toml_str("recipe = \"nope\"").is_err());
        assert!(ExperimentConfig::from_toml_str("recipe = \"trace-dump\"\ndensity_per_cm3 = -1.0").is_err());
    }

    #[test]
    fn hash_ignores_key_order_and_output_dir() {
        let a = ExperimentConfig::from_toml_str("recipe = \"trace-dump\"\nlarmor_hz = 5e6\nensemble = 2").unwrap();
        let b = ExperimentConfig::from_toml_str(
            "ensemble = 2\nlarmor_hz = 5e6\nrecipe = \"trace-dump\"\noutput_dir = \"x\"",
        )
        .unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig::from_toml_str("recipe = \"trace-dump\"\nlarmor_hz = 6e6\nensemble = 2").unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn sweep_points_set_the_key() {
        let cfg = ExperimentConfig::from_toml_str(BASE).unwrap();
        let p = cfg.at(1e13).unwrap();
        assert_eq!(p.params.density_per_cm3, 1e13);
        assert_eq!(p.recipe, Recipe::DensitySweep);
        assert_eq!(p.current_sweep_value(), 1e13);
        let s =
            ExperimentConfig::from_toml_str("recipe = \"static-distance-sweep\"\nsweep_values = [0.5, 1.0]").unwrap();
        assert_eq!(s.at(0.5).unwrap().xi, Some(0.5));
        assert_eq!(s.at(0.5).unwrap().geometry, GeometryKind::Static);
    }

    #[test]
    fn overrides() {
        let (k, v) = parse_override("omega_rabi_hz=75e6").unwrap();
        assert_eq!(k, "omega_rabi_hz");
        assert_eq!(v, Value::Float(75e6));
        assert_eq!(parse_override_value("static"), Value::String("static".into()));
        assert!(parse_override("bogus=1").is_err());
        let cfg = ExperimentConfig::from_toml_str(BASE).unwrap().with_override("omega_rabi_hz", v).unwrap();
        assert!((cfg.params.omega_rabi - 2.0 * PI * 75e6).abs() < 1e-3);
    }
}
