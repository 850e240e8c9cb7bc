// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-atom and two-atom operators for a J=1/2 -> J'=1/2 transition.
//!
//! Single-atom basis (quantization axis x, along the magnetic field):
//!
//! | index | state        |
//! |-------|--------------|
//! | 0     | \|g, -1/2⟩   |
//! | 1     | \|g, +1/2⟩   |
//! | 2     | \|e, -1/2⟩   |
//! | 3     | \|e, +1/2⟩   |
//!
//! Two-atom states use `4 * a + b` with `a` the state of atom 1 and `b` the state of atom 2.
//! Units: ħ = 1, every energy is an angular frequency in rad/s.

use std::f64::consts::PI;

use nalgebra::{SMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupling::CouplingTensors;
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Op4 = SMatrix<C64, 4, 4>;
pub type Op16 = SMatrix<C64, 16, 16>;

pub const G_MINUS: usize = 0;
pub const G_PLUS: usize = 1;
pub const E_MINUS: usize = 2;
pub const E_PLUS: usize = 3;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Spherical components of the dipole operator, quantized along x.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DipoleComponent {
    /// π component, along the quantization axis x.
    X = 0,
    SigmaPlus = 1,
    SigmaMinus = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// Linear polarization along y, perpendicular to the field: drives ΔM_x = ±1.
    Sigma,
    /// Linear polarization along x, parallel to the field: drives ΔM_x = 0.
    Pi,
}

impl std::str::FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(Polarization::Sigma),
            "pi" => Ok(Polarization::Pi),
            other => Err(Error::param("polarization", format!("expected `sigma` or `pi`, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SingleAtomOps {
    pub s_x: Op4,
    pub s_y: Op4,
    pub s_z: Op4,
    /// Raising parts indexed by [`DipoleComponent`].
    pub d_plus: [Op4; 3],
    /// Lowering parts indexed by [`DipoleComponent`].
    pub d_minus: [Op4; 3],
    /// Raising parts of the Cartesian components x, y, z.
    pub d_plus_cart: [Op4; 3],
    /// Lowering parts of the Cartesian components x, y, z.
    pub d_minus_cart: [Op4; 3],
    pub ground_projector: Op4,
    pub excited_projector: Op4,
    pub d0: f64,
}

/// Builds the spin and dipole operators with d₀ = 1.
pub fn build_single_atom_ops() -> SingleAtomOps {
    let d0 = 1.0;
    let mut s_x = Op4::zeros();
    let mut s_y = Op4::zeros();
    let mut s_z = Op4::zeros();
    for base in [0, 2] {
        s_x[(base, base)] = C64::new(-0.5, 0.0);
        s_x[(base + 1, base + 1)] = C64::new(0.5, 0.0);
        s_y[(base, base + 1)] = C64::new(0.5, 0.0);
        s_y[(base + 1, base)] = C64::new(0.5, 0.0);
        s_z[(base, base + 1)] = C64::new(0.0, 0.5);
        s_z[(base + 1, base)] = C64::new(0.0, -0.5);
    }

    let pi_amp = d0 / 3f64.sqrt();
    let sigma_amp = -d0 * (2.0f64 / 3.0).sqrt();

    let mut dp_x = Op4::zeros();
    dp_x[(E_MINUS, G_MINUS)] = C64::new(-pi_amp, 0.0);
    dp_x[(E_PLUS, G_PLUS)] = C64::new(pi_amp, 0.0);
    let mut dp_sp = Op4::zeros();
    dp_sp[(E_PLUS, G_MINUS)] = C64::new(sigma_amp, 0.0);
    let mut dp_sm = Op4::zeros();
    dp_sm[(E_MINUS, G_PLUS)] = C64::new(sigma_amp, 0.0);

    let d_plus = [dp_x, dp_sp, dp_sm];
    let d_minus = [dp_x.adjoint(), dp_sm.adjoint(), dp_sp.adjoint()];

    let r2 = 2f64.sqrt();
    let dp_y = (dp_sp + dp_sm) / C64::new(r2, 0.0);
    let dp_z = (dp_sp - dp_sm) / C64::new(0.0, r2);
    let d_plus_cart = [dp_x, dp_y, dp_z];
    let d_minus_cart = [dp_x.adjoint(), dp_y.adjoint(), dp_z.adjoint()];

    let mut ground_projector = Op4::zeros();
    ground_projector[(G_MINUS, G_MINUS)] = ONE;
    ground_projector[(G_PLUS, G_PLUS)] = ONE;
    let excited_projector = Op4::identity() - ground_projector;

    SingleAtomOps { s_x, s_y, s_z, d_plus, d_minus, d_plus_cart, d_minus_cart, ground_projector, excited_projector, d0 }
}

/// Physical and numerical parameters of a simulation. Rates are angular (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    /// Rabi angular frequency Ω of the driven transition.
    pub omega_rabi: f64,
    /// Optical detuning Δ = ω_p − ω₀.
    pub detuning: f64,
    pub larmor: f64,
    /// Excited-state population decay rate Γ₀.
    pub gamma0: f64,
    /// Transit relaxation rate γ_t.
    pub gamma_t: f64,
    pub polarization: Polarization,
    /// Dimensionless noise amplitude a_f.
    pub noise_amplitude: f64,
    /// Step of the Runge–Kutta integrator (s).
    pub dt: f64,
    /// Spacing of recorded samples (s).
    pub sample_interval: f64,
    pub trace_duration: f64,
    /// Conformation lifetime τ_c (s).
    pub tau_c: f64,
    /// Atomic density (atoms per cm³).
    pub density_per_cm3: f64,
    /// Optical wavevector k₀ = 2π/λ (1/m).
    pub k0: f64,
}

pub const RB_D2_WAVELENGTH: f64 = 780.241e-9;
pub const RB_D2_GAMMA0_HZ: f64 = 6.0666e6;

impl Default for SimulationParams {
    fn default() -> Self {
        let two_pi = 2.0 * PI;
        let mut p = SimulationParams {
            omega_rabi: two_pi * 150e6,
            detuning: two_pi * 300e6,
            larmor: two_pi * 9e6,
            gamma0: two_pi * RB_D2_GAMMA0_HZ,
            gamma_t: two_pi * 20e3,
            polarization: Polarization::Sigma,
            noise_amplitude: 1.0,
            dt: 0.0,
            sample_interval: 10e-9,
            trace_duration: 50e-6,
            tau_c: 100e-9,
            density_per_cm3: 1e12,
            k0: two_pi / RB_D2_WAVELENGTH,
        };
        p.dt = p.default_dt(0.0);
        p
    }
}

impl SimulationParams {
    /// Largest coherent or dissipative rate of the single-atom problem.
    pub fn max_rate(&self) -> f64 {
        self.omega_rabi.abs().max(self.detuning.abs()).max(self.larmor.abs()).max(self.gamma0)
    }

    /// 1/(50·max(Δ, Ω, ω_L, Γ₀, ‖ζ‖)).
    pub fn default_dt(&self, zeta_norm: f64) -> f64 {
        1.0 / (50.0 * self.max_rate().max(zeta_norm))
    }

    /// Optical coherence decay, half the population decay.
    pub fn optical_coherence_decay(&self) -> f64 {
        self.gamma0 / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("omega_rabi", self.omega_rabi),
            ("larmor", self.larmor),
            ("gamma0", self.gamma0),
            ("gamma_t", self.gamma_t),
            ("noise_amplitude", self.noise_amplitude),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::param(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !self.detuning.is_finite() {
            return Err(Error::param("detuning", "must be finite"));
        }
        let positive = [
            ("dt", self.dt),
            ("sample_interval", self.sample_interval),
            ("trace_duration", self.trace_duration),
            ("tau_c", self.tau_c),
            ("density_per_cm3", self.density_per_cm3),
            ("k0", self.k0),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::param(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if self.sample_interval > self.trace_duration {
            return Err(Error::param("sample_interval", "longer than the trace"));
        }
        Ok(())
    }

    /// Step-size resolution constraint of the explicit integrator.
    pub fn check_resolution(&self, zeta_norm: f64) -> Result<()> {
        let product = self.dt * self.max_rate().max(zeta_norm);
        if product > 0.1 {
            return Err(Error::param(
                "dt",
                format!(
                    "dt * max rate = {product:.3} exceeds 0.1; reduce dt to at most {:e}",
                    0.1 / self.max_rate().max(zeta_norm)
                ),
            ));
        }
        Ok(())
    }
}

/// H = ω_L S_x − Δ P_e − (Ω/2)·√3·(D₊ + D₋) along the drive polarization.
///
/// The √3 undoes the Clebsch–Gordan factor of the driven π or σ pair, so every driven
/// ground-excited matrix element has magnitude Ω/2.
pub fn build_single_atom_hamiltonian(p: &SimulationParams) -> Op4 {
    let ops = build_single_atom_ops();
    single_atom_hamiltonian_with(p, &ops)
}

pub(crate) fn single_atom_hamiltonian_with(p: &SimulationParams, ops: &SingleAtomOps) -> Op4 {
    let axis = match p.polarization {
        Polarization::Pi => 0,
        Polarization::Sigma => 1,
    };
    let drive = ops.d_plus_cart[axis] + ops.d_minus_cart[axis];
    let scale = -(p.omega_rabi / 2.0) * 3f64.sqrt() / ops.d0;
    ops.s_x * C64::new(p.larmor, 0.0) - ops.excited_projector * C64::new(p.detuning, 0.0) + drive * C64::new(scale, 0.0)
}

/// op ⊗ 𝟙 for `which == 1`, 𝟙 ⊗ op for `which == 2`.
pub fn embed_two_atom(op: &Op4, which: usize) -> Result<Op16> {
    match which {
        1 => Ok(kron(op, &Op4::identity())),
        2 => Ok(kron(&Op4::identity(), op)),
        other => Err(Error::AtomIndex(other)),
    }
}

pub fn kron(a: &Op4, b: &Op4) -> Op16 {
    let mut out = Op16::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..4 {
                for l in 0..4 {
                    out[(4 * i + k, 4 * j + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// V_dd = Σ_{i≠j} Σ_{a,b} ζ_ab D₊^{a,(i)} D₋^{b,(j)} with Cartesian components a, b.
pub fn build_vdd(t: &CouplingTensors, ops: &SingleAtomOps) -> Op16 {
    let mut v = Op16::zeros();
    for a in 0..3 {
        for b in 0..3 {
            let z = t.zeta[(a, b)];
            if z == 0.0 {
                continue;
            }
            let forward = kron(&ops.d_plus_cart[a], &ops.d_minus_cart[b]);
            let backward = kron(&ops.d_minus_cart[b], &ops.d_plus_cart[a]);
            v += (forward + backward) * C64::new(z, 0.0);
        }
    }
    v
}

/// H₀ + V_dd for the pair.
pub fn build_two_atom_hamiltonian(p: &SimulationParams, t: &CouplingTensors, ops: &SingleAtomOps) -> Op16 {
    let h = single_atom_hamiltonian_with(p, ops);
    let eye = Op4::identity();
    kron(&h, &eye) + kron(&eye, &h) + build_vdd(t, ops)
}

/// Collective S_z = s_z ⊗ 𝟙 + 𝟙 ⊗ s_z.
pub fn total_sz(ops: &SingleAtomOps) -> Op16 {
    let eye = Op4::identity();
    kron(&ops.s_z, &eye) + kron(&eye, &ops.s_z)
}

/// Unit vector in the lab frame (x = field, z = propagation).
pub fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

pub fn max_abs(m: &Op16) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_defect(m: &Op16) -> f64 {
    max_abs(&(m - m.adjoint()))
}
