// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Power spectral densities, closed-form lineshapes and least-squares fits.

pub mod fit;
pub mod models;
pub mod welch;

use serde::{Deserialize, Serialize};

pub use fit::{
    extract_splitting, extract_splitting_with, fit_spectrum, fit_spectrum_with, lf_fraction, FitModel, FitOptions,
    FitResult, LfComponent, LfKind, Peak, Splitting,
};
pub use models::{czz_model, lorentzian_lf, ou_spectrum_matrix, sinc2_model};
pub use welch::{average_spectra, psd, psd_from_samples, Window};

/// One-sided PSD on a uniform frequency grid starting at 0 Hz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub psd: Vec<f64>,
    /// Bin width (Hz).
    pub resolution: f64,
    pub n_averages: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Σ psd · Δf.
    pub fn total_power(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.resolution
    }

    pub fn max_frequency(&self) -> f64 {
        self.freqs.last().copied().unwrap_or(0.0)
    }

    /// Index of the bin whose centre is closest to `f`.
    pub fn bin_of(&self, f: f64) -> usize {
        let k = (f / self.resolution).round().max(0.0) as usize;
        k.min(self.len().saturating_sub(1))
    }

    pub fn scaled(&self, factor: f64) -> Spectrum {
        Spectrum { psd: self.psd.iter().map(|v| v * factor).collect(), ..self.clone() }
    }
}
