// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! First-order dipole-dipole shifts of the light-dressed ground manifold, and the exact
//! diagonalization they approximate.

use log::warn;
use nalgebra::{Matrix2, SVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::coupling::{Conformation, CouplingTensors};
use crate::error::{Error, Result};
use crate::qcore::{
    build_single_atom_ops, build_two_atom_hamiltonian, total_sz, SimulationParams, C64, E_MINUS, E_PLUS, G_MINUS,
    G_PLUS,
};

/// ψ = 2 atan(Ω/(2Δ)).
pub fn mixing_angle(omega_rabi: f64, detuning: f64) -> Result<f64> {
    if detuning == 0.0 {
        return Err(Error::param("detuning", "mixing angle undefined at zero detuning"));
    }
    Ok(2.0 * (omega_rabi / (2.0 * detuning)).atan())
}

/// α = (Ω²Δ²/4)/(Ω²/4 + Δ²)², i.e. sin²ψ/4.
pub fn alpha(omega_rabi: f64, detuning: f64) -> f64 {
    let o2 = omega_rabi * omega_rabi;
    let d2 = detuning * detuning;
    let den = o2 / 4.0 + d2;
    if den == 0.0 {
        0.0
    } else {
        (o2 * d2 / 4.0) / (den * den)
    }
}

/// α = sin²ψ/4 with the exact dressing angle tan ψ = Ω/Δ, i.e. Ω²/(4(Δ² + Ω²)).
pub fn alpha_dressed(omega_rabi: f64, detuning: f64) -> f64 {
    let o2 = omega_rabi * omega_rabi;
    let den = o2 + detuning * detuning;
    if den == 0.0 {
        0.0
    } else {
        o2 / (4.0 * den)
    }
}

pub type Ket4 = SVector<C64, 4>;
pub type Ket16 = SVector<C64, 16>;

/// Light-dressed single-atom states and the symmetrized two-atom basis built from them.
#[derive(Clone, Debug)]
pub struct DressedManifold {
    pub psi: f64,
    /// |−⟩ = cos(ψ/2)|g,−1/2⟩ + sin(ψ/2)|e,+1/2⟩.
    pub minus: Ket4,
    /// |+⟩ = cos(ψ/2)|g,+1/2⟩ + sin(ψ/2)|e,−1/2⟩.
    pub plus: Ket4,
    /// |−,−⟩, |s⟩, |u⟩, |+,+⟩.
    pub pair_states: [Ket16; 4],
    /// Unperturbed energies of `pair_states` (rad/s), light shift (√(Δ²+Ω²) − Δ)/2 per atom.
    pub energies: [f64; 4],
}

fn pair(a: &Ket4, b: &Ket4) -> Ket16 {
    Ket16::from_fn(|k, _| a[k / 4] * b[k % 4])
}

impl DressedManifold {
    pub fn new(omega_rabi: f64, detuning: f64, larmor: f64) -> Result<Self> {
        let psi = mixing_angle(omega_rabi, detuning)?;
        let (s, c) = (psi / 2.0).sin_cos();
        let mut minus = Ket4::zeros();
        minus[G_MINUS] = C64::new(c, 0.0);
        minus[E_PLUS] = C64::new(s, 0.0);
        let mut plus = Ket4::zeros();
        plus[G_PLUS] = C64::new(c, 0.0);
        plus[E_MINUS] = C64::new(s, 0.0);
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mp = pair(&minus, &plus);
        let pm = pair(&plus, &minus);
        let pair_states = [pair(&minus, &minus), (pm + mp) * r, (pm - mp) * r, pair(&plus, &plus)];
        let shift = ((detuning * detuning + omega_rabi * omega_rabi).sqrt() - detuning) / 2.0;
        let (em, ep) = (-larmor / 2.0 + shift, larmor / 2.0 + shift);
        Ok(DressedManifold { psi, minus, plus, pair_states, energies: [2.0 * em, em + ep, em + ep, 2.0 * ep] })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CgMode {
    /// Clebsch–Gordan coefficients left out.
    AsPrinted,
    /// Clebsch–Gordan weights of the dipole matrices included: 2/3 on σ, 1/3 on π.
    WithCg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftPrediction {
    pub alpha: f64,
    /// Shifts of |−,−⟩, |+,+⟩, |s⟩, |u⟩ (rad/s).
    pub shifts: [f64; 4],
    pub delta: f64,
    pub omega_minus: f64,
    pub omega_plus: f64,
    pub cg_mode: CgMode,
}

fn check_diagonal(t: &CouplingTensors) -> Result<()> {
    let z = &t.zeta;
    let off = z[(0, 1)].abs().max(z[(0, 2)].abs()).max(z[(1, 2)].abs());
    if off > 1e-12 * z.amax().max(f64::MIN_POSITIVE) {
        return Err(Error::NonDiagonalCoupling(off));
    }
    Ok(())
}

/// First-order shifts for a coupling tensor diagonal in {x, y, z}.
pub fn dd_shifts(t: &CouplingTensors, alpha: f64, larmor: f64, mode: CgMode) -> Result<ShiftPrediction> {
    check_diagonal(t)?;
    let (xx, yy, zz) = (t.zeta[(0, 0)], t.zeta[(1, 1)], t.zeta[(2, 2)]);
    let (outer, s, u, delta) = match mode {
        CgMode::AsPrinted => (
            alpha * (yy + zz),
            alpha * (yy - zz + 2.0 * xx),
            alpha * (yy - zz - 2.0 * xx),
            2.0 * alpha * (zz - xx).abs(),
        ),
        CgMode::WithCg => {
            let w = 2.0 * alpha / 3.0;
            (w * (yy + zz), w * (yy - zz + xx), w * (yy - zz - xx), w * (2.0 * zz - xx).abs())
        }
    };
    Ok(ShiftPrediction {
        alpha,
        shifts: [outer, outer, s, u],
        delta,
        omega_minus: larmor - delta,
        omega_plus: larmor + delta,
        cg_mode: mode,
    })
}

/// α·[[ζ_yy − ζ_zz, 2ζ_xx], [2ζ_xx, ζ_yy − ζ_zz]] on {|+,−⟩, |−,+⟩}.
pub fn reduced_vdd(t: &CouplingTensors, alpha: f64) -> Matrix2<f64> {
    let d = t.zeta[(1, 1)] - t.zeta[(2, 2)];
    let o = 2.0 * t.zeta[(0, 0)];
    Matrix2::new(d, o, o, d) * alpha
}

/// A ground-manifold transition visible in S_z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    /// rad/s, non-negative.
    pub frequency: f64,
    /// |⟨a|S_z|b⟩|².
    pub weight: f64,
    pub states: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundSpectrum {
    pub lines: Vec<Line>,
    /// Energies of the four ground-like eigenstates, ascending.
    pub energies: [f64; 4],
    /// Ground-subspace weight of each selected eigenstate.
    pub ground_weights: [f64; 4],
    /// Smallest distance from the selected energies to any other eigenvalue (rad/s).
    pub gap: f64,
}

impl GroundSpectrum {
    /// Distance between the two strongest distinct lines; 0 if only one line frequency exists.
    pub fn splitting(&self) -> f64 {
        let mut lines = self.lines.clone();
        lines.sort_by(|a, b| b.weight.total_cmp(&a.weight));
        let Some(first) = lines.first() else { return 0.0 };
        let tol = 1e-9 * first.frequency.abs().max(1.0);
        lines
            .iter()
            .find(|l| (l.frequency - first.frequency).abs() > tol)
            .map_or(0.0, |l| (l.frequency - first.frequency).abs())
    }
}

/// Relative S_z weight below which a transition counts as forbidden.
const FORBIDDEN: f64 = 1e-8;

fn is_ground(k: usize) -> bool {
    k / 4 < 2 && k % 4 < 2
}

/// Exact diagonalization of H₀ + V_dd restricted to the four most ground-like eigenstates.
pub fn ground_manifold_frequencies(p: &SimulationParams, c: Option<&Conformation>) -> Result<GroundSpectrum> {
    let ops = build_single_atom_ops();
    let t = match c {
        Some(c) => CouplingTensors::new(c, p.gamma0)?,
        None => CouplingTensors::decoupled(),
    };
    let h = build_two_atom_hamiltonian(p, &t, &ops);
    let eig = SymmetricEigen::new(h);
    let weights: Vec<f64> =
        (0..16).map(|n| (0..16).filter(|&k| is_ground(k)).map(|k| eig.eigenvectors[(k, n)].norm_sqr()).sum()).collect();
    let mut order: Vec<usize> = (0..16).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]));
    let mut chosen: Vec<usize> = order[..4].to_vec();
    chosen.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let gap = order[4..]
        .iter()
        .flat_map(|&o| chosen.iter().map(move |&c| (o, c)))
        .map(|(o, c)| (eig.eigenvalues[o] - eig.eigenvalues[c]).abs())
        .fold(f64::INFINITY, f64::min);
    if gap < 10.0 * p.larmor {
        warn!("ground manifold separated from the rest by only {gap:e} rad/s");
    }

    let sz = total_sz(&ops);
    let mut lines = Vec::new();
    let mut max_w: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let a = eig.eigenvectors.column(chosen[i]);
            let b = eig.eigenvectors.column(chosen[j]);
            let w = (a.adjoint() * sz * b)[(0, 0)].norm_sqr();
            max_w = max_w.max(w);
            let f = (eig.eigenvalues[chosen[j]] - eig.eigenvalues[chosen[i]]).abs();
            lines.push(Line { frequency: f, weight: w, states: (i, j) });
        }
    }
    // Zero-frequency pairs are degenerate states, not precession lines.
    let f_min = 1e-9 * p.larmor.abs().max(1.0);
    lines.retain(|l| l.weight > FORBIDDEN * max_w && l.frequency > f_min);
    Ok(GroundSpectrum {
        lines,
        energies: std::array::from_fn(|k| eig.eigenvalues[chosen[k]]),
        ground_weights: std::array::from_fn(|k| weights[chosen[k]]),
        gap,
    })
}
