// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Least-squares fits of spin-noise spectra: one or two precession peaks plus an optional
//! zero-centred low-frequency component.
//!
//! The solver is a box-constrained Levenberg–Marquardt iteration with Marquardt diagonal
//! scaling, run from a data-driven initial guess and a fixed number of seeded perturbations
//! of it. Residuals are unweighted in the normalized PSD; parameter errors use the
//! heteroscedasticity-consistent sandwich covariance, since periodogram bin variance scales
//! with the bin mean.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::models::{czz_gradient, czz_model, lorentzian_lf, sinc, sinc2_model};
use super::Spectrum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LfKind {
    None,
    /// A_lf/(γ_c² + ω²), the experiment-style tail.
    Lorentzian,
    /// σ² sinc²(π ν τ_c), the signature of hard conformation switching.
    Sinc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitModel {
    pub peaks: usize,
    pub lf: LfKind,
}

impl FitModel {
    pub const fn single_peak() -> Self {
        FitModel { peaks: 1, lf: LfKind::None }
    }

    pub const fn two_peak() -> Self {
        FitModel { peaks: 2, lf: LfKind::None }
    }

    pub const fn peak_plus_lf() -> Self {
        FitModel { peaks: 1, lf: LfKind::Lorentzian }
    }

    pub const fn sinc_lf() -> Self {
        FitModel { peaks: 1, lf: LfKind::Sinc }
    }

    pub fn n_params(&self) -> usize {
        3 * self.peaks + if self.lf == LfKind::None { 0 } else { 2 }
    }

    pub fn name(&self) -> String {
        let lf = match self.lf {
            LfKind::None => "",
            LfKind::Lorentzian => "+lorentzian",
            LfKind::Sinc => "+sinc",
        };
        format!("{}peak{lf}", self.peaks)
    }
}

impl std::str::FromStr for FitModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single_peak" => Ok(FitModel::single_peak()),
            "two_peak" => Ok(FitModel::two_peak()),
            "peak_plus_lf" => Ok(FitModel::peak_plus_lf()),
            "sinc_lf" => Ok(FitModel::sinc_lf()),
            other => Err(Error::param(
                "fit_model",
                format!("expected single_peak, two_peak, peak_plus_lf or sinc_lf, got `{other}`"),
            )),
        }
    }
}

/// One precession line of the form [`czz_model`]; rates in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub amplitude: f64,
    /// HWHM γ.
    pub gamma: f64,
    pub center: f64,
}

/// Low-frequency component. `width` is γ_c (rad/s) for a Lorentzian, τ_c (s) for sinc².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LfComponent {
    pub kind: LfKind,
    pub amplitude: f64,
    pub width: f64,
}

impl LfComponent {
    pub fn eval(&self, freq_hz: f64) -> f64 {
        match self.kind {
            LfKind::None => 0.0,
            LfKind::Lorentzian => lorentzian_lf(2.0 * PI * freq_hz, self.amplitude, self.width),
            LfKind::Sinc => sinc2_model(freq_hz, self.amplitude, self.width),
        }
    }

    /// Frequency of the first zero of a sinc² component (Hz).
    pub fn first_zero_hz(&self) -> Option<f64> {
        (self.kind == LfKind::Sinc).then(|| 1.0 / self.width)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    pub peaks: Vec<Peak>,
    pub peak_sigma: Vec<Peak>,
    pub lf: Option<LfComponent>,
    pub lf_sigma: Option<LfComponent>,
    /// ‖model − psd‖₂ over the fitted band, in PSD units.
    pub residual_norm: f64,
    /// Parameter covariance in the order (A, γ, ω) per peak, then (A_lf, width).
    pub covariance: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    /// Fitted band (Hz).
    pub band: (f64, f64),
}

impl FitResult {
    pub fn eval(&self, freq_hz: f64) -> f64 {
        let w = 2.0 * PI * freq_hz;
        let peaks: f64 = self.peaks.iter().map(|p| czz_model(w, p.amplitude, p.gamma, p.center)).sum();
        peaks + self.lf.map_or(0.0, |l| l.eval(freq_hz))
    }

    pub fn eval_lf(&self, freq_hz: f64) -> f64 {
        self.lf.map_or(0.0, |l| l.eval(freq_hz))
    }

    /// Peak with the largest amplitude-weighted height.
    pub fn dominant_peak(&self) -> Peak {
        *self.peaks.iter().max_by(|a, b| peak_height(a).total_cmp(&peak_height(b))).expect("at least one peak")
    }
}

fn peak_height(p: &Peak) -> f64 {
    czz_model(p.center, p.amplitude, p.gamma, p.center)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions {
    /// Fitted band (Hz); defaults to all bins above DC.
    pub band: Option<(f64, f64)>,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Initial τ_c for a sinc² component (s).
    pub tau_c_hint: Option<f64>,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { band: None, restarts: 5, max_iterations: 300, tau_c_hint: None, seed: 0x5eed }
    }
}

pub fn fit_spectrum(s: &Spectrum, model: FitModel) -> Result<FitResult> {
    fit_spectrum_with(s, model, &FitOptions::default())
}

struct Problem<'a> {
    model: FitModel,
    freqs: &'a [f64],
    y: Vec<f64>,
    y_scale: f64,
    scale: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Problem<'_> {
    fn physical(&self, theta: &DVector<f64>) -> Vec<f64> {
        theta.iter().zip(&self.scale).map(|(t, s)| t * s).collect()
    }

    /// Model values and Jacobian with respect to the scaled parameters θ.
    fn eval(&self, theta: &DVector<f64>, jac: Option<&mut DMatrix<f64>>) -> DVector<f64> {
        let q = self.physical(theta);
        let n = self.freqs.len();
        let mut out = DVector::zeros(n);
        let mut jrows = jac;
        for (i, &f) in self.freqs.iter().enumerate() {
            let w = 2.0 * PI * f;
            let mut v = 0.0;
            for k in 0..self.model.peaks {
                let (a, g, c) = (q[3 * k], q[3 * k + 1], q[3 * k + 2]);
                let grad = czz_gradient(w, a, g, c);
                v += a * grad[0];
                if let Some(j) = jrows.as_deref_mut() {
                    j[(i, 3 * k)] = grad[0];
                    j[(i, 3 * k + 1)] = grad[1];
                    j[(i, 3 * k + 2)] = grad[2];
                }
            }
            let base = 3 * self.model.peaks;
            match self.model.lf {
                LfKind::None => {}
                LfKind::Lorentzian => {
                    let (a, g) = (q[base], q[base + 1]);
                    let den = g * g + w * w;
                    v += a / den;
                    if let Some(j) = jrows.as_deref_mut() {
                        j[(i, base)] = 1.0 / den;
                        j[(i, base + 1)] = -2.0 * a * g / (den * den);
                    }
                }
                LfKind::Sinc => {
                    let (a, tau) = (q[base], q[base + 1]);
                    let x = PI * f * tau;
                    let s = sinc(x);
                    v += a * s * s;
                    if let Some(j) = jrows.as_deref_mut() {
                        let ds = if x.abs() < 1e-6 { -x / 3.0 } else { (x.cos() - s) / x };
                        j[(i, base)] = s * s;
                        j[(i, base + 1)] = 2.0 * a * s * ds * PI * f;
                    }
                }
            }
            out[i] = v / self.y_scale;
        }
        if let Some(j) = jrows {
            for c in 0..j.ncols() {
                let factor = self.scale[c] / self.y_scale;
                j.column_mut(c).scale_mut(factor);
            }
        }
        out
    }

    fn cost(&self, theta: &DVector<f64>) -> f64 {
        let m = self.eval(theta, None);
        m.iter().zip(&self.y).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    fn clamp(&self, theta: &mut DVector<f64>) {
        for (i, t) in theta.iter_mut().enumerate() {
            *t = t.clamp(self.lower[i], self.upper[i]);
        }
    }
}

struct Run {
    theta: DVector<f64>,
    cost: f64,
    iterations: usize,
    converged: bool,
}

fn levenberg_marquardt(prob: &Problem, start: DVector<f64>, max_iter: usize) -> Run {
    let p = start.len();
    let n = prob.freqs.len();
    let mut theta = start;
    prob.clamp(&mut theta);
    let mut jac = DMatrix::zeros(n, p);
    let y = DVector::from_column_slice(&prob.y);
    let mut model = prob.eval(&theta, Some(&mut jac));
    let mut resid = &model - &y;
    let mut cost = resid.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter && cost.is_finite() {
        iterations += 1;
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &resid;
        let dmax = jtj.diagonal().max().max(f64::MIN_POSITIVE);
        let mut accepted = false;
        while lambda < 1e16 {
            let mut m = jtj.clone();
            for k in 0..p {
                m[(k, k)] += lambda * jtj[(k, k)].max(1e-12 * dmax);
            }
            let Some(step) = m.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = &theta + &step;
            prob.clamp(&mut trial);
            let trial_cost = prob.cost(&trial);
            if trial_cost.is_finite() && trial_cost < cost {
                let rel = (cost - trial_cost) / cost.max(f64::MIN_POSITIVE);
                let moved = (&trial - &theta).amax();
                theta = trial;
                model = prob.eval(&theta, Some(&mut jac));
                resid = &model - &y;
                cost = resid.norm_squared();
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if rel < 1e-12 || moved < 1e-12 {
                    converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            // No descent direction left within the box: a stationary point.
            converged = true;
        }
        if converged {
            break;
        }
    }
    Run { theta, cost, iterations, converged }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    if s.is_empty() {
        0.0
    } else {
        s[s.len() / 2]
    }
}

/// Half width at half maximum (Hz) around index `i`, by linear interpolation.
fn half_width(freqs: &[f64], y: &[f64], i: usize) -> f64 {
    let half = y[i] / 2.0;
    let mut right = freqs[freqs.len() - 1];
    for k in i..y.len() - 1 {
        if y[k + 1] < half {
            right = freqs[k] + (freqs[k + 1] - freqs[k]) * (y[k] - half) / (y[k] - y[k + 1]);
            break;
        }
    }
    let mut left = freqs[0];
    for k in (1..=i).rev() {
        if y[k - 1] < half {
            left = freqs[k] - (freqs[k] - freqs[k - 1]) * (y[k] - half) / (y[k] - y[k - 1]);
            break;
        }
    }
    (right - left) / 2.0
}

fn local_maxima(y: &[f64], threshold: f64) -> Vec<usize> {
    let mut out: Vec<usize> =
        (1..y.len().saturating_sub(1)).filter(|&i| y[i] >= y[i - 1] && y[i] >= y[i + 1] && y[i] > threshold).collect();
    out.sort_by(|&a, &b| y[b].total_cmp(&y[a]));
    out
}

/// Initial guess in physical units.
fn initial_guess(model: FitModel, freqs: &[f64], y: &[f64], resolution: f64, opts: &FitOptions) -> Result<Vec<f64>> {
    let med = median(y);
    let mut maxima = local_maxima(y, 3.0 * med);
    if maxima.is_empty() {
        maxima = local_maxima(y, 0.0);
    }
    let first = *maxima.first().ok_or_else(|| Error::Spectral("no local maximum in the fitted band".into()))?;
    let hw1 = half_width(freqs, y, first).max(resolution);
    let second = maxima.iter().copied().find(|&i| (freqs[i] - freqs[first]).abs() > hw1);

    let peak_from = |i: usize, hw: f64, height: f64| {
        let gamma = 2.0 * PI * hw;
        let center = 2.0 * PI * freqs[i];
        let unit = czz_model(center, 1.0, gamma, center);
        [height / unit, gamma, center]
    };
    let mut q = Vec::with_capacity(model.n_params());
    if model.peaks == 1 {
        q.extend(peak_from(first, hw1, y[first]));
    } else {
        let (a, b, hw_a, hw_b) = match second {
            Some(j) => {
                let hw2 = half_width(freqs, y, j).max(resolution);
                let sep = (freqs[j] - freqs[first]).abs();
                (first, j, hw1.min(sep / 2.0).max(resolution), hw2.min(sep / 2.0).max(resolution))
            }
            None => {
                let shift = ((hw1 / 2.0) / resolution).round().max(1.0) as usize;
                let lo = first.saturating_sub(shift);
                let hi = (first + shift).min(y.len() - 1);
                (lo, hi, hw1 / 2.0, hw1 / 2.0)
            }
        };
        q.extend(peak_from(a, hw_a, y[a] / 2.0_f64.max(1.0)));
        q.extend(peak_from(b, hw_b, y[b] / 2.0_f64.max(1.0)));
    }
    let f_peak = freqs[first];
    let low = y[0].max(f64::MIN_POSITIVE);
    match model.lf {
        LfKind::None => {}
        LfKind::Lorentzian => {
            let k_half = y.iter().position(|&v| v < low / 2.0).unwrap_or(1).max(1);
            let f_half = freqs[k_half].min(f_peak / 2.0).max(resolution);
            let gc = 2.0 * PI * f_half;
            q.extend([low * gc * gc, gc]);
        }
        LfKind::Sinc => {
            let tau = opts.tau_c_hint.unwrap_or_else(|| {
                let k_half = y.iter().position(|&v| v < low / 2.0).unwrap_or(1).max(1);
                0.443 / freqs[k_half].max(resolution)
            });
            q.extend([low, tau]);
        }
    }
    Ok(q)
}

fn bounds(model: FitModel, f_lo: f64, f_hi: f64, resolution: f64) -> (Vec<f64>, Vec<f64>) {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let w_hi = 2.0 * PI * f_hi;
    for _ in 0..model.peaks {
        lo.extend([0.0, 0.1 * 2.0 * PI * resolution, 2.0 * PI * f_lo]);
        hi.extend([f64::INFINITY, w_hi, w_hi]);
    }
    match model.lf {
        LfKind::None => {}
        LfKind::Lorentzian => {
            lo.extend([0.0, 0.1 * 2.0 * PI * resolution]);
            hi.extend([f64::INFINITY, 10.0 * w_hi]);
        }
        LfKind::Sinc => {
            lo.extend([0.0, 0.5 / f_hi]);
            hi.extend([f64::INFINITY, 1.0 / resolution]);
        }
    }
    (lo, hi)
}

pub fn fit_spectrum_with(s: &Spectrum, model: FitModel, opts: &FitOptions) -> Result<FitResult> {
    if model.peaks == 0 || model.peaks > 2 {
        return Err(Error::param("fit_model", "one or two peaks supported"));
    }
    let (f_lo, f_hi) = opts.band.unwrap_or((s.resolution * 0.5, s.max_frequency()));
    let idx: Vec<usize> =
        (0..s.len()).filter(|&k| s.freqs[k] >= f_lo && s.freqs[k] <= f_hi && s.freqs[k] > 0.0).collect();
    if idx.len() < 2 * model.n_params() {
        return Err(Error::Spectral(format!("{} bins in band, need at least {}", idx.len(), 2 * model.n_params())));
    }
    let freqs: Vec<f64> = idx.iter().map(|&k| s.freqs[k]).collect();
    let raw: Vec<f64> = idx.iter().map(|&k| s.psd[k]).collect();
    let y_scale = raw.iter().copied().fold(0.0, f64::max);
    if !(y_scale > 0.0) || !y_scale.is_finite() {
        return Err(Error::Spectral("spectrum is zero or non-finite in the band".into()));
    }
    let y: Vec<f64> = raw.iter().map(|v| v / y_scale).collect();
    let band = (freqs[0], freqs[freqs.len() - 1]);

    let q0 = initial_guess(model, &freqs, &raw, s.resolution, opts)?;
    let f_peak = q0[2] / (2.0 * PI);
    if s.max_frequency() < 1.5 * f_peak {
        return Err(Error::Spectral(format!(
            "grid ends at {:.3e} Hz, below 1.5x the peak frequency {:.3e} Hz",
            s.max_frequency(),
            f_peak
        )));
    }
    let scale: Vec<f64> = q0.iter().map(|v| v.abs().max(f64::MIN_POSITIVE)).collect();
    let (lo_phys, hi_phys) = bounds(model, band.0, band.1, s.resolution);
    let prob = Problem {
        model,
        freqs: &freqs,
        y,
        y_scale,
        lower: lo_phys.iter().zip(&scale).map(|(b, s)| b / s).collect(),
        upper: hi_phys.iter().zip(&scale).map(|(b, s)| b / s).collect(),
        scale,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<Run> = None;
    for attempt in 0..=opts.restarts {
        let mut start = DVector::from_element(q0.len(), 1.0);
        if attempt > 0 {
            for v in start.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *v *= (0.3 * z).exp();
            }
        }
        let run = levenberg_marquardt(&prob, start, opts.max_iterations);
        if best.as_ref().is_none_or(|b| run.cost < b.cost || (run.converged && !b.converged && run.cost <= b.cost)) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one attempt");
    if !best.cost.is_finite() || !best.converged {
        return Err(Error::FitFailed { restarts: opts.restarts, best_residual: best.cost.sqrt() * y_scale });
    }

    let q = prob.physical(&best.theta);
    let mut jac = DMatrix::zeros(freqs.len(), q.len());
    let fitted = prob.eval(&best.theta, Some(&mut jac));
    let dof = (freqs.len() - q.len()).max(1) as f64;
    let p = q.len();
    let bread = (jac.transpose() * &jac).try_inverse().unwrap_or_else(|| DMatrix::from_element(p, p, f64::NAN));
    let inflation = freqs.len() as f64 / dof;
    let mut weighted = jac.clone();
    for (i, mut row) in weighted.row_iter_mut().enumerate() {
        row *= inflation * (prob.y[i] - fitted[i]).powi(2);
    }
    let cov_theta = &bread * (jac.transpose() * weighted) * &bread;
    let covariance: Vec<Vec<f64>> =
        (0..p).map(|i| (0..p).map(|j| cov_theta[(i, j)] * prob.scale[i] * prob.scale[j]).collect()).collect();
    let sd: Vec<f64> = (0..p).map(|i| covariance[i][i].max(0.0).sqrt()).collect();

    let mut peaks: Vec<(Peak, Peak)> = (0..model.peaks)
        .map(|k| {
            (
                Peak { amplitude: q[3 * k], gamma: q[3 * k + 1], center: q[3 * k + 2] },
                Peak { amplitude: sd[3 * k], gamma: sd[3 * k + 1], center: sd[3 * k + 2] },
            )
        })
        .collect();
    peaks.sort_by(|a, b| a.0.center.total_cmp(&b.0.center));
    let base = 3 * model.peaks;
    let (lf, lf_sigma) = match model.lf {
        LfKind::None => (None, None),
        kind => (
            Some(LfComponent { kind, amplitude: q[base], width: q[base + 1] }),
            Some(LfComponent { kind, amplitude: sd[base], width: sd[base + 1] }),
        ),
    };
    Ok(FitResult {
        model,
        peaks: peaks.iter().map(|p| p.0).collect(),
        peak_sigma: peaks.iter().map(|p| p.1).collect(),
        lf,
        lf_sigma,
        residual_norm: best.cost.sqrt() * y_scale,
        covariance,
        iterations: best.iterations,
        converged: best.converged,
        band,
    })
}

/// Two-peak splitting estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Splitting {
    /// |ω₊ − ω₋| (rad/s), 0 when unresolved.
    pub two_delta: f64,
    pub resolved: bool,
    pub fit: FitResult,
}

pub fn extract_splitting(s: &Spectrum) -> Result<Splitting> {
    extract_splitting_with(s, FitModel::two_peak(), &FitOptions::default())
}

/// Splitting from a fit with two peaks; unresolved when the centres are closer than the
/// larger of the two widths.
pub fn extract_splitting_with(s: &Spectrum, model: FitModel, opts: &FitOptions) -> Result<Splitting> {
    let model = FitModel { peaks: 2, ..model };
    let fit = fit_spectrum_with(s, model, opts)?;
    let (a, b) = (fit.peaks[0], fit.peaks[1]);
    let sep = (b.center - a.center).abs();
    let resolved = sep >= a.gamma.max(b.gamma) && a.amplitude > 0.0 && b.amplitude > 0.0;
    Ok(Splitting { two_delta: if resolved { sep } else { 0.0 }, resolved, fit })
}

/// Fraction of the fitted power in the low-frequency component, integrated over the grid.
pub fn lf_fraction(s: &Spectrum, fit: &FitResult) -> f64 {
    if fit.lf.is_none() {
        return 0.0;
    }
    let (mut lf, mut total) = (0.0, 0.0);
    for &f in &s.freqs {
        lf += fit.eval_lf(f);
        total += fit.eval(f);
    }
    if total > 0.0 {
        (lf / total).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(peaks: &[Peak], lf: Option<LfComponent>, noise: f64, seed: u64) -> Spectrum {
        let res = 20e3;
        let freqs: Vec<f64> = (0..1500).map(|k| k as f64 * res).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psd = freqs
            .iter()
            .map(|&f| {
                let w = 2.0 * PI * f;
                let v: f64 = peaks.iter().map(|p| czz_model(w, p.amplitude, p.gamma, p.center)).sum::<f64>()
                    + lf.map_or(0.0, |l| l.eval(f));
                let z: f64 = StandardNormal.sample(&mut rng);
                v * (1.0 + noise * z)
            })
            .collect();
        Spectrum { freqs, psd, resolution: res, n_averages: 1 }
    }

    fn peak(hwhm_hz: f64, center_hz: f64) -> Peak {
        Peak { amplitude: 1.0, gamma: 2.0 * PI * hwhm_hz, center: 2.0 * PI * center_hz }
    }

    #[test]
    fn recovers_single_peak() {
        let truth = peak(270e3, 9e6);
        let s = synthetic(&[truth], None, 0.01, 1);
        let fit = fit_spectrum(&s, FitModel::single_peak()).unwrap();
        let p = fit.peaks[0];
        assert!((p.gamma / truth.gamma - 1.0).abs() < 0.03);
        assert!((p.center / truth.center - 1.0).abs() < 0.01);
        assert!(fit.peak_sigma[0].gamma > 0.0);
    }

    #[test]
    fn amplitude_rescaling_invariance() {
        let s = synthetic(&[peak(300e3, 8e6)], None, 0.02, 2);
        let a = fit_spectrum(&s, FitModel::single_peak()).unwrap();
        let b = fit_spectrum(&s.scaled(1e-7), FitModel::single_peak()).unwrap();
        assert!((a.peaks[0].gamma / b.peaks[0].gamma - 1.0).abs() < 1e-6);
        assert!((a.peaks[0].center / b.peaks[0].center - 1.0).abs() < 1e-9);
        assert!((b.peaks[0].amplitude / a.peaks[0].amplitude / 1e-7 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn resolves_symmetric_doublet() {
        let (f0, delta) = (9e6, 1.5e6);
        let s = synthetic(&[peak(250e3, f0 - delta), peak(250e3, f0 + delta)], None, 0.01, 3);
        let sp = extract_splitting(&s).unwrap();
        assert!(sp.resolved);
        assert!((sp.two_delta / (2.0 * PI) - 2.0 * delta).abs() < s.resolution);
    }

    #[test]
    fn single_line_is_unresolved() {
        let s = synthetic(&[peak(300e3, 9e6)], None, 0.0, 4);
        let sp = extract_splitting(&s).unwrap();
        assert!(!sp.resolved);
        assert_eq!(sp.two_delta, 0.0);
    }

    #[test]
    fn absent_tail_fits_near_zero() {
        let s = synthetic(&[peak(300e3, 9e6)], None, 0.01, 5);
        let fit = fit_spectrum(&s, FitModel::peak_plus_lf()).unwrap();
        let lf = fit.lf.unwrap();
        let sigma = fit.lf_sigma.unwrap();
        assert!(lf.amplitude <= 3.0 * sigma.amplitude + 1e-12 * fit.peaks[0].amplitude, "{lf:?} {sigma:?}");
        assert!(lf_fraction(&s, &fit) < 0.01);
    }

    #[test]
    fn sinc_tail_first_zero() {
        let p = peak(600e3, 9e6);
        let height = czz_model(p.center, p.amplitude, p.gamma, p.center);
        let lf = LfComponent { kind: LfKind::Sinc, amplitude: 0.5 * height, width: 100e-9 };
        let s = synthetic(&[p], Some(lf), 0.01, 6);
        let fit = fit_spectrum(&s, FitModel::sinc_lf()).unwrap();
        let zero = fit.lf.unwrap().first_zero_hz().unwrap();
        assert!((zero - 10e6).abs() < 2.0 * s.resolution, "{zero}");
        assert!(lf_fraction(&s, &fit) > 0.1);
    }
}
