// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Transit noise: independent Gaussian fluctuations of each atom's ground-state Zeeman
//! population imbalance and coherence.

use std::sync::OnceLock;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qcore::{build_single_atom_ops, kron, Op16, Op4, C64};

use super::basis::{Parity, SwapBasis};

/// Number of Gaussian draws per increment: three per atom.
pub const NOISE_CHANNELS: usize = 6;

/// Generators f_m with f = a_f Σ_m g_m f_m.
///
/// Per atom the ground-manifold restrictions of s_x (population imbalance), s_y (real part of
/// the Zeeman coherence) and s_z (imaginary part), embedded as f ⊗ P_g and P_g ⊗ f so that no
/// element touches an excited state.
pub fn noise_generators() -> &'static [Op16; NOISE_CHANNELS] {
    static GENERATORS: OnceLock<[Op16; NOISE_CHANNELS]> = OnceLock::new();
    GENERATORS.get_or_init(|| {
        let ops = build_single_atom_ops();
        let pg = ops.ground_projector;
        let local: [Op4; 3] = [pg * ops.s_x * pg, pg * ops.s_y * pg, pg * ops.s_z * pg];
        std::array::from_fn(|m| if m < 3 { kron(&local[m], &pg) } else { kron(&pg, &local[m - 3]) })
    })
}

pub fn draw_gaussians<R: Rng + ?Sized>(rng: &mut R) -> [f64; NOISE_CHANNELS] {
    std::array::from_fn(|_| rng.sample(StandardNormal))
}

/// f·√dt for one integrator step.
pub fn noise_increment<R: Rng + ?Sized>(rng: &mut R, a_f: f64, dt: f64) -> Op16 {
    let g = draw_gaussians(rng);
    noise_from_gaussians(&g, a_f * dt.sqrt())
}

pub fn noise_from_gaussians(g: &[f64; NOISE_CHANNELS], scale: f64) -> Op16 {
    let gens = noise_generators();
    let mut f = Op16::zeros();
    for (gen, &gm) in gens.iter().zip(g) {
        f += gen * C64::new(gm * scale, 0.0);
    }
    f
}

/// Noise generators expressed in one parity block of the exchange basis.
pub fn projected_generators(parity: Parity) -> Vec<DVector<f64>> {
    let basis = SwapBasis::get();
    noise_generators().iter().map(|g| basis.coords(parity, g)).collect()
}
