// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Welch estimator: non-overlapping, mean-subtracted, windowed segments.

use std::f64::consts::PI;

use log::warn;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dynamics::TimeTrace;
use crate::error::{Error, Result};

use super::Spectrum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            // Periodic Hann.
            Window::Hann => (0..n).map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / n as f64).cos()).collect(),
        }
    }
}

pub fn psd(trace: &TimeTrace, segment_len: usize, window: Window) -> Result<Spectrum> {
    psd_from_samples(&trace.samples, trace.dt, segment_len, window)
}

/// One-sided Welch PSD normalized so that Σ psd · Δf equals the window-weighted variance
/// Σ (w x)² / Σ w² averaged over segments.
pub fn psd_from_samples(samples: &[f64], dt: f64, segment_len: usize, window: Window) -> Result<Spectrum> {
    if segment_len < 4 || segment_len > samples.len() {
        return Err(Error::Spectral(format!("segment length {segment_len} must lie in [4, {}]", samples.len())));
    }
    if !(dt > 0.0) {
        return Err(Error::Spectral(format!("sample interval must be > 0, got {dt}")));
    }
    let n_seg = samples.len() / segment_len;
    if n_seg < 2 {
        warn!("single Welch segment: no averaging");
    }
    let w = window.coefficients(segment_len);
    let w2: f64 = w.iter().map(|v| v * v).sum();
    let fs = 1.0 / dt;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(segment_len);
    let n_bins = segment_len / 2 + 1;
    let mut acc = vec![0.0; n_bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); segment_len];
    for seg in samples.chunks_exact(segment_len) {
        let mean = seg.iter().sum::<f64>() / segment_len as f64;
        for (b, (x, wk)) in buf.iter_mut().zip(seg.iter().zip(&w)) {
            *b = Complex64::new((x - mean) * wk, 0.0);
        }
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            let p = buf[k].norm_sqr();
            let edge = k == 0 || (segment_len % 2 == 0 && k == segment_len / 2);
            *a += if edge { p } else { 2.0 * p };
        }
    }
    let norm = 1.0 / (fs * w2 * n_seg as f64);
    let resolution = fs / segment_len as f64;
    Ok(Spectrum {
        freqs: (0..n_bins).map(|k| k as f64 * resolution).collect(),
        psd: acc.into_iter().map(|a| a * norm).collect(),
        resolution,
        n_averages: n_seg,
    })
}

/// Average of spectra on a common grid, weighted by their segment counts.
pub fn average_spectra(spectra: &[Spectrum]) -> Result<Spectrum> {
    let first = spectra.first().ok_or_else(|| Error::Spectral("no spectra to average".into()))?;
    let mut psd = vec![0.0; first.len()];
    let mut total = 0usize;
    for s in spectra {
        if s.len() != first.len() || (s.resolution - first.resolution).abs() > 1e-9 * first.resolution {
            return Err(Error::Spectral("spectra on different grids".into()));
        }
        for (a, v) in psd.iter_mut().zip(&s.psd) {
            *a += v * s.n_averages as f64;
        }
        total += s.n_averages;
    }
    for a in &mut psd {
        *a /= total as f64;
    }
    Ok(Spectrum { freqs: first.freqs.clone(), psd, resolution: first.resolution, n_averages: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn parseval_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..4096).map(|_| StandardNormal.sample(&mut rng)).collect();
        let n = 512;
        let s = psd_from_samples(&x, 1e-3, n, Window::Hann).unwrap();
        let w = Window::Hann.coefficients(n);
        let w2: f64 = w.iter().map(|v| v * v).sum();
        let mut expected = 0.0;
        for seg in x.chunks_exact(n) {
            let mean = seg.iter().sum::<f64>() / n as f64;
            expected += seg.iter().zip(&w).map(|(v, wk)| ((v - mean) * wk).powi(2)).sum::<f64>() / w2;
        }
        expected /= (x.len() / n) as f64;
        assert!((s.total_power() / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sinusoid_peaks_at_its_bin() {
        let dt = 1e-8;
        let f0 = 3.2e6;
        let x: Vec<f64> = (0..8192).map(|k| (2.0 * PI * f0 * k as f64 * dt).sin()).collect();
        let s = psd_from_samples(&x, dt, 1024, Window::Hann).unwrap();
        let peak = (0..s.len()).max_by(|&a, &b| s.psd[a].total_cmp(&s.psd[b])).unwrap();
        assert_eq!(peak, s.bin_of(f0));
    }

    #[test]
    fn rejects_bad_segment() {
        assert!(psd_from_samples(&[0.0; 10], 1.0, 20, Window::Hann).is_err());
    }
}
