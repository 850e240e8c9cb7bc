// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form lineshapes. Angular arguments (ω, γ) are in rad/s, ν in Hz.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A (γ² + ω² + ω_L²) / ((γ² + ω_L² − ω²)² + 4γ²ω²).
pub fn czz_model(omega: f64, a: f64, gamma: f64, larmor: f64) -> f64 {
    let g2 = gamma * gamma;
    let w2 = omega * omega;
    let l2 = larmor * larmor;
    let d = g2 + l2 - w2;
    a * (g2 + w2 + l2) / (d * d + 4.0 * g2 * w2)
}

/// ∂/∂(A, γ, ω_L) of [`czz_model`].
pub fn czz_gradient(omega: f64, a: f64, gamma: f64, larmor: f64) -> [f64; 3] {
    let g2 = gamma * gamma;
    let w2 = omega * omega;
    let l2 = larmor * larmor;
    let num = g2 + w2 + l2;
    let d = g2 + l2 - w2;
    let den = d * d + 4.0 * g2 * w2;
    let f = num / den;
    let dden_dg = 4.0 * gamma * d + 8.0 * gamma * w2;
    let dden_dl = 4.0 * larmor * d;
    let dg = a * (2.0 * gamma * den - num * dden_dg) / (den * den);
    let dl = a * (2.0 * larmor * den - num * dden_dl) / (den * den);
    [f, dg, dl]
}

/// Zero-centred Lorentzian A/(γ_c² + ω²).
pub fn lorentzian_lf(omega: f64, a: f64, gamma_c: f64) -> f64 {
    a / (gamma_c * gamma_c + omega * omega)
}

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// σ² sinc²(π ν τ_c): first zero at ν = 1/τ_c.
pub fn sinc2_model(nu: f64, sigma2: f64, tau_c: f64) -> f64 {
    let s = sinc(std::f64::consts::PI * nu * tau_c);
    sigma2 * s * s
}

/// Autocorrelation of a signal held constant over windows of length τ_c with independent
/// values, averaged over the window phase: σ²(1 − |τ|/τ_c) for |τ| < τ_c.
pub fn triangular_autocorrelation(tau: f64, sigma2: f64, tau_c: f64) -> f64 {
    let x = tau.abs() / tau_c;
    if x < 1.0 {
        sigma2 * (1.0 - x)
    } else {
        0.0
    }
}

/// Drift of the damped precession, R = [[−γ, ω_L], [−ω_L, −γ]].
pub fn ou_drift(gamma: f64, larmor: f64) -> Matrix2<f64> {
    Matrix2::new(-gamma, larmor, -larmor, -gamma)
}

/// C(ω) = (R + iω)⁻¹ G Gᵀ (Rᵀ − iω)⁻¹.
pub fn ou_spectrum_matrix(r: &Matrix2<f64>, g: &Matrix2<f64>, omega: f64) -> Result<Matrix2<Complex64>> {
    let iw = Matrix2::identity().map(|v: f64| Complex64::new(0.0, v * omega));
    let rc = r.map(|v| Complex64::new(v, 0.0));
    let left = (rc + iw).try_inverse().ok_or(Error::SingularSpectrum(omega))?;
    let right = (rc.transpose() - iw).try_inverse().ok_or(Error::SingularSpectrum(omega))?;
    let q = (g * g.transpose()).map(|v| Complex64::new(v, 0.0));
    Ok(left * q * right)
}

/// Stationary covariance Σ solving R Σ + Σ Rᵀ + G Gᵀ = 0 (2×2, by vectorization).
pub fn lyapunov_2x2(r: &Matrix2<f64>, g: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let q = g * g.transpose();
    // Unknowns (Σ11, Σ12, Σ22) with Σ symmetric.
    let a = nalgebra::Matrix3::new(
        2.0 * r[(0, 0)],
        2.0 * r[(0, 1)],
        0.0,
        r[(1, 0)],
        r[(0, 0)] + r[(1, 1)],
        r[(0, 1)],
        0.0,
        2.0 * r[(1, 0)],
        2.0 * r[(1, 1)],
    );
    let b = nalgebra::Vector3::new(-q[(0, 0)], -q[(0, 1)], -q[(1, 1)]);
    let s = a.lu().solve(&b).ok_or_else(|| Error::Spectral("singular Lyapunov system".into()))?;
    Ok(Matrix2::new(s[0], s[1], s[1], s[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn czz_limits() {
        let (a, g, l) = (2.0, 1e3, 1e6);
        assert_relative_eq!(czz_model(l, a, g, l), a / (2.0 * g * g), max_relative = 1e-5);
        let big = 1e12;
        assert_relative_eq!(czz_model(big, a, g, l) * big * big, a, max_relative = 1e-6);
    }

    #[test]
    fn czz_gradient_matches_differences() {
        let (w, a, g, l) = (0.9e6, 1.3, 2e5, 1e6);
        let grad = czz_gradient(w, a, g, l);
        let h = 1e-3;
        let fd_g = (czz_model(w, a, g + h, l) - czz_model(w, a, g - h, l)) / (2.0 * h);
        let fd_l = (czz_model(w, a, g, l + h) - czz_model(w, a, g, l - h)) / (2.0 * h);
        assert_relative_eq!(grad[0] * a, czz_model(w, a, g, l), max_relative = 1e-14);
        assert_relative_eq!(grad[1], fd_g, max_relative = 1e-6);
        assert_relative_eq!(grad[2], fd_l, max_relative = 1e-6);
    }

    #[test]
    fn plain_lorentzian_when_no_precession() {
        let r = ou_drift(3.0, 0.0);
        let g = Matrix2::identity() * 2f64.sqrt();
        for w in [0.0, 1.0, 7.5] {
            let c = ou_spectrum_matrix(&r, &g, w).unwrap();
            assert_relative_eq!(c[(1, 1)].re, 2.0 / (9.0 + w * w), max_relative = 1e-14);
        }
    }

    #[test]
    fn sinc_zeros() {
        let tau = 100e-9;
        assert_eq!(sinc2_model(0.0, 3.0, tau), 3.0);
        assert!(sinc2_model(1.0 / tau, 1.0, tau) < 1e-30);
        assert!(sinc2_model(1.5 / tau, 1.0, tau) > sinc2_model(1.2 / tau, 1.0, tau));
    }
}
