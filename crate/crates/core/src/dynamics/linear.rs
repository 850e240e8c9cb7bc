// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact stationary spectrum of ⟨S_z⟩ for a fixed conformation.
//!
//! Around its steady state the even-block coordinates obey the linear SDE dx = L x dt + B dW,
//! with B the projected noise generators scaled by a_f, so the two-sided spectrum of
//! y = sᵀx is S(ω) = ‖Bᵀ (−iω − Lᵀ)⁻¹ s‖².

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{build_single_atom_ops, total_sz};

use super::basis::{Parity, SwapBasis};
use super::liouvillian::Liouvillian;
use super::noise::projected_generators;

/// One-sided PSD of ⟨S_z⟩ (units²/Hz) at the given frequencies (Hz).
pub fn stationary_psd(l: &Liouvillian, noise_amplitude: f64, freqs_hz: &[f64]) -> Result<Vec<f64>> {
    let basis = SwapBasis::get();
    let l_even = basis.project(l, Parity::Even);
    let ops = build_single_atom_ops();
    let s = basis.coords(Parity::Even, &total_sz(&ops));
    let gens = projected_generators(Parity::Even);
    stationary_psd_from_block(&l_even, &s, &gens, noise_amplitude, freqs_hz)
}

pub fn stationary_psd_from_block(
    l_even: &DMatrix<f64>,
    s: &DVector<f64>,
    gens: &[DVector<f64>],
    noise_amplitude: f64,
    freqs_hz: &[f64],
) -> Result<Vec<f64>> {
    let n = l_even.nrows();
    let lt: DMatrix<Complex64> = l_even.transpose().map(|v| Complex64::new(-v, 0.0));
    let sc: DVector<Complex64> = s.map(|v| Complex64::new(v, 0.0));
    let mut out = Vec::with_capacity(freqs_hz.len());
    for &f in freqs_hz {
        let w = 2.0 * PI * f;
        let mut a = lt.clone();
        for k in 0..n {
            a[(k, k)] -= Complex64::new(0.0, w);
        }
        let v = a.lu().solve(&sc).ok_or(Error::SingularSpectrum(w))?;
        let power: f64 =
            gens.iter().map(|g| g.iter().zip(v.iter()).map(|(gk, vk)| vk * *gk).sum::<Complex64>().norm_sqr()).sum();
        out.push(2.0 * noise_amplitude * noise_amplitude * power);
    }
    Ok(out)
}
