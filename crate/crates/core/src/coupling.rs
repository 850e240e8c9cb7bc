// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Green's dyadic and the coherent (ζ) and dissipative (γ) coupling tensors of a pair,
//! plus nearest-neighbour sampling of pair geometries in a vapour.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::direction;

/// Below this ξ the closed forms lose digits to 1/ξ³ cancellations.
pub const SERIES_THRESHOLD: f64 = 1e-3;

/// Lower bound on sampled pair distances (m).
pub const R_MIN: f64 = 1e-9;

/// Geometry of the pair: distance and orientation of atom 2 relative to atom 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conformation {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    /// Optical wavevector used to form ξ = k₀ r.
    pub k0: f64,
}

impl Conformation {
    pub fn new(r: f64, theta: f64, phi: f64, k0: f64) -> Self {
        Conformation { r, theta, phi, k0 }
    }

    /// Conformation at a given dimensionless separation ξ.
    pub fn from_xi(xi: f64, theta: f64, phi: f64, k0: f64) -> Self {
        Conformation { r: xi / k0, theta, phi, k0 }
    }

    pub fn xi(&self) -> f64 {
        self.k0 * self.r
    }

    pub fn unit(&self) -> Vector3<f64> {
        direction(self.theta, self.phi)
    }

    fn checked_xi(&self) -> Result<f64> {
        let xi = self.xi();
        if xi > 0.0 && xi.is_finite() {
            Ok(xi)
        } else {
            Err(Error::NonPositiveSeparation(xi))
        }
    }
}

/// ζ and γ in the lab frame (rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingTensors {
    pub zeta: Matrix3<f64>,
    pub gamma: Matrix3<f64>,
}

impl CouplingTensors {
    pub fn new(c: &Conformation, gamma0: f64) -> Result<Self> {
        Ok(CouplingTensors { zeta: zeta_tensor(c, gamma0)?, gamma: gamma_tensor(c, gamma0)? })
    }

    /// Tensors of an infinitely separated pair.
    pub fn decoupled() -> Self {
        CouplingTensors { zeta: Matrix3::zeros(), gamma: Matrix3::zeros() }
    }
}

fn outer(n: &Vector3<f64>) -> Matrix3<f64> {
    n * n.transpose()
}

/// G = [(1 + i/ξ − 1/ξ²) 𝟙 + (−1 − 3i/ξ + 3/ξ²) n̂n̂] e^{iξ}/ξ.
pub fn greens_dyadic(c: &Conformation) -> Result<Matrix3<Complex64>> {
    let xi = c.checked_xi()?;
    let i = Complex64::new(0.0, 1.0);
    let phase = (i * xi).exp() / xi;
    let transverse = (1.0 + i / xi - 1.0 / (xi * xi)) * phase;
    let longitudinal = (-1.0 - 3.0 * i / xi + 3.0 / (xi * xi)) * phase;
    let nn = outer(&c.unit());
    Ok(Matrix3::from_fn(|a, b| {
        let delta = if a == b { 1.0 } else { 0.0 };
        transverse * delta + longitudinal * nn[(a, b)]
    }))
}

/// Isotropic and n̂n̂ coefficients of ζ/(3Γ₀/4).
pub fn zeta_coefficients(xi: f64) -> (f64, f64) {
    if xi < SERIES_THRESHOLD {
        let x3 = xi * xi * xi;
        let iso = 1.0 / x3 - 0.5 / xi + 3.0 * xi / 8.0;
        let nn = -3.0 / x3 - 0.5 / xi - xi / 8.0 + x3 / 48.0;
        (iso, nn)
    } else {
        let (s, c) = xi.sin_cos();
        let x2 = xi * xi;
        let x3 = x2 * xi;
        let iso = c / x3 + s / x2 - c / xi;
        let nn = c / xi - 3.0 * c / x3 - 3.0 * s / x2;
        (iso, nn)
    }
}

/// Isotropic and n̂n̂ coefficients of γ/(3Γ₀/4).
pub fn gamma_coefficients(xi: f64) -> (f64, f64) {
    if xi < SERIES_THRESHOLD {
        let x2 = xi * xi;
        let x4 = x2 * x2;
        (2.0 / 3.0 - 2.0 * x2 / 15.0 + x4 / 140.0, x2 / 15.0 - x4 / 210.0)
    } else {
        let (s, c) = xi.sin_cos();
        let x2 = xi * xi;
        let x3 = x2 * xi;
        (s / xi - s / x3 + c / x2, -s / xi + 3.0 * s / x3 - 3.0 * c / x2)
    }
}

/// ζ = (3Γ₀/4)[(cos ξ/ξ³ + sin ξ/ξ² − cos ξ/ξ) 𝟙 + (cos ξ/ξ − 3 cos ξ/ξ³ − 3 sin ξ/ξ²) n̂n̂].
pub fn zeta_tensor(c: &Conformation, gamma0: f64) -> Result<Matrix3<f64>> {
    let xi = c.checked_xi()?;
    let (iso, nn) = zeta_coefficients(xi);
    Ok((Matrix3::identity() * iso + outer(&c.unit()) * nn) * (0.75 * gamma0))
}

/// γ = (3Γ₀/4) Im G.
pub fn gamma_tensor(c: &Conformation, gamma0: f64) -> Result<Matrix3<f64>> {
    let xi = c.checked_xi()?;
    let (iso, nn) = gamma_coefficients(xi);
    Ok((Matrix3::identity() * iso + outer(&c.unit()) * nn) * (0.75 * gamma0))
}

/// Density in atoms/cm³ to atoms/m³.
pub fn per_cm3_to_per_m3(n: f64) -> f64 {
    n * 1e6
}

/// Typical nearest-neighbour distance 0.55 N^{-1/3} (m), N in atoms/cm³.
pub fn mean_nn_distance(density_per_cm3: f64) -> f64 {
    0.55 * per_cm3_to_per_m3(density_per_cm3).powf(-1.0 / 3.0)
}

/// CDF of the nearest-neighbour distance, 1 − exp(−(4/3)πN r³).
pub fn nn_cdf(r: f64, density_per_cm3: f64) -> f64 {
    let n = per_cm3_to_per_m3(density_per_cm3);
    -(-(4.0 / 3.0) * PI * n * r * r * r).exp_m1()
}

/// Inverse of [`nn_cdf`] at quantile u ∈ [0, 1), without the distance floor.
pub fn nn_quantile(u: f64, density_per_cm3: f64) -> f64 {
    let n = per_cm3_to_per_m3(density_per_cm3);
    (3.0 * (-(-u).ln_1p()) / (4.0 * PI * n)).cbrt()
}

/// How polar angles are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleSampling {
    /// θ uniform on [0, π].
    #[default]
    Uniform,
    /// cos θ uniform on [−1, 1].
    Isotropic,
}

/// Draws a pair geometry from nearest-neighbour statistics at the given density.
pub fn sample_conformation<R: Rng + ?Sized>(
    density_per_cm3: f64,
    k0: f64,
    angles: AngleSampling,
    rng: &mut R,
) -> Conformation {
    let u: f64 = rng.random();
    let r = nn_quantile(u, density_per_cm3).max(R_MIN);
    let theta = match angles {
        AngleSampling::Uniform => PI * rng.random::<f64>(),
        AngleSampling::Isotropic => (1.0 - 2.0 * rng.random::<f64>()).acos(),
    };
    let phi = 2.0 * PI * rng.random::<f64>();
    Conformation { r, theta, phi, k0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const K0: f64 = 2.0 * PI / 780e-9;

    #[test]
    fn greens_transverse_at_unit_xi() {
        let c = Conformation::from_xi(1.0, 0.0, 0.0, K0);
        let g = greens_dyadic(&c).unwrap();
        assert_relative_eq!(g[(0, 0)].re, -1f64.sin(), epsilon = 1e-15);
        assert_relative_eq!(g[(0, 0)].im, 1f64.cos(), epsilon = 1e-15);
        assert_eq!(g[(0, 0)], g[(1, 1)]);
    }

    #[test]
    fn zeta_isotropic_part_at_pi() {
        let c = Conformation::from_xi(PI, 0.0, 0.0, K0);
        let z = zeta_tensor(&c, 4.0 / 3.0).unwrap();
        assert_relative_eq!(z[(0, 0)], -1.0 / PI.powi(3) + 1.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn axial_geometry_is_diagonal() {
        let c = Conformation::from_xi(0.7, 0.0, 0.0, K0);
        let z = zeta_tensor(&c, 1.0).unwrap();
        assert_eq!(z[(0, 1)], 0.0);
        assert_eq!(z[(0, 0)], z[(1, 1)]);
        assert!((z[(2, 2)] - z[(0, 0)]).abs() > 1e-3);
    }

    #[test]
    fn series_matches_closed_form_at_crossover() {
        let xi: f64 = 0.999e-3;
        assert!(xi < SERIES_THRESHOLD);
        let (s, c) = xi.sin_cos();
        let x2 = xi * xi;
        let x3 = x2 * xi;
        let (iso, nn) = zeta_coefficients(xi);
        assert_relative_eq!(iso, c / x3 + s / x2 - c / xi, max_relative = 1e-9);
        assert_relative_eq!(nn, c / xi - 3.0 * c / x3 - 3.0 * s / x2, max_relative = 1e-9);
        let (iso, nn) = gamma_coefficients(xi);
        assert_relative_eq!(iso, s / xi - s / x3 + c / x2, max_relative = 1e-6);
        assert_relative_eq!(nn, -s / xi + 3.0 * s / x3 - 3.0 * c / x2, max_relative = 1e-2);
    }

    #[test]
    fn gamma_near_field_limit() {
        let c = Conformation::from_xi(1e-6, 1.0, 2.0, K0);
        let g = gamma_tensor(&c, 1.0).unwrap();
        let diff = g - Matrix3::identity() * 0.5;
        assert!(diff.abs().max() < 1e-6);
    }

    #[test]
    fn rejects_nonpositive_xi() {
        let c = Conformation::new(0.0, 0.0, 0.0, K0);
        assert!(greens_dyadic(&c).is_err());
        assert!(zeta_tensor(&c, 1.0).is_err());
        assert!(gamma_tensor(&c, 1.0).is_err());
    }

    #[test]
    fn nn_distance_values() {
        assert_relative_eq!(mean_nn_distance(1e14), 0.55 * 1e-20f64.cbrt(), max_relative = 1e-12);
        assert_relative_eq!(mean_nn_distance(8e14), 0.5 * mean_nn_distance(1e14), max_relative = 1e-12);
        let q = nn_quantile(1.0 - (-1f64).exp(), 1e14);
        assert_relative_eq!(q, (3.0 / (4.0 * PI * 1e20)).cbrt(), max_relative = 1e-12);
    }

    #[test]
    fn sampler_is_deterministic() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..5).map(|_| sample_conformation(1e14, K0, AngleSampling::Uniform, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
        for c in draw(3) {
            assert!(c.r >= R_MIN && (0.0..=PI).contains(&c.theta) && (0.0..2.0 * PI).contains(&c.phi));
        }
    }
}
