// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-atom Liouvillian: coherent evolution under H₀ + V_dd, collective radiative decay
//! and transit relaxation toward the unpolarized ground state.

use nalgebra::{DMatrix, SMatrix, SymmetricEigen};

use crate::coupling::CouplingTensors;
use crate::qcore::{build_two_atom_hamiltonian, kron, Op16, Op4, SimulationParams, SingleAtomOps, C64};

/// Dimension of vec(ρ).
pub const SUPER_DIM: usize = 256;

/// L[ρ] = −i(H_eff ρ − ρ H_eff†) + Σ_k 2μ_k J_k ρ J_k† − γ_t (ρ − Tr ρ · ρ_t)
/// with H_eff = H − i Σ_k μ_k J_k† J_k.
///
/// The jump operators diagonalize the radiative rate matrix over (atom, Cartesian component):
/// Γ₀/2 on the atom-diagonal blocks and γ on the off-diagonal blocks.
#[derive(Clone, Debug)]
pub struct Jump {
    /// μ_k ≥ 0.
    pub rate: f64,
    pub op: Op16,
    pub op_adj: Op16,
}

#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub hamiltonian: Op16,
    pub h_eff: Op16,
    pub jumps: Vec<Jump>,
    pub gamma_t: f64,
    /// Relaxation target of the transit term, (P_g/2) ⊗ (P_g/2).
    pub target: Op16,
}

impl Liouvillian {
    pub fn new(p: &SimulationParams, t: &CouplingTensors, ops: &SingleAtomOps) -> Self {
        let hamiltonian = build_two_atom_hamiltonian(p, t, ops);
        let eye = Op4::identity();

        let mut rates = SMatrix::<f64, 6, 6>::zeros();
        for a in 0..3 {
            rates[(a, a)] = p.gamma0 / 2.0;
            rates[(a + 3, a + 3)] = p.gamma0 / 2.0;
            for b in 0..3 {
                rates[(a, b + 3)] = t.gamma[(a, b)];
                rates[(b + 3, a)] = t.gamma[(a, b)];
            }
        }
        let lowering: [Op16; 6] = std::array::from_fn(|k| {
            if k < 3 {
                kron(&ops.d_minus_cart[k], &eye)
            } else {
                kron(&eye, &ops.d_minus_cart[k - 3])
            }
        });
        let eig = SymmetricEigen::new(rates);
        let mut jumps = Vec::with_capacity(6);
        let mut decay = Op16::zeros();
        for k in 0..6 {
            let mu = eig.eigenvalues[k].max(0.0);
            if mu <= 1e-14 * p.gamma0.max(f64::MIN_POSITIVE) {
                continue;
            }
            let mut j = Op16::zeros();
            for m in 0..6 {
                let u = eig.eigenvectors[(m, k)];
                if u != 0.0 {
                    j += lowering[m] * C64::new(u, 0.0);
                }
            }
            let op_adj = j.adjoint();
            decay += op_adj * j * C64::new(mu, 0.0);
            jumps.push(Jump { rate: mu, op: j, op_adj });
        }
        let h_eff = hamiltonian - decay * C64::new(0.0, 1.0);

        let half_ground = ops.ground_projector * C64::new(0.5, 0.0);
        let target = kron(&half_ground, &half_ground);

        Liouvillian { hamiltonian, h_eff, jumps, gamma_t: p.gamma_t, target }
    }

    pub fn apply(&self, rho: &Op16) -> Op16 {
        let i = C64::new(0.0, 1.0);
        let h_rho = self.h_eff * rho;
        let rho_h = rho * self.h_eff.adjoint();
        let mut out = (h_rho - rho_h) * (-i);
        for jump in &self.jumps {
            out += jump.op * rho * jump.op_adj * C64::new(2.0 * jump.rate, 0.0);
        }
        if self.gamma_t != 0.0 {
            out -= (rho - self.target * rho.trace()) * C64::new(self.gamma_t, 0.0);
        }
        out
    }

    /// Dense superoperator acting on column-stacked vec(ρ), index i + 16 j for ρ[(i, j)].
    pub fn superoperator(&self) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(SUPER_DIM, SUPER_DIM);
        for b in 0..16 {
            for a in 0..16 {
                let mut unit = Op16::zeros();
                unit[(a, b)] = C64::new(1.0, 0.0);
                let image = self.apply(&unit);
                let col = a + 16 * b;
                for j in 0..16 {
                    for i in 0..16 {
                        out[(i + 16 * j, col)] = image[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Largest magnitude rate in the generator, used for step-size checks.
    pub fn rate_scale(&self) -> f64 {
        self.h_eff.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }
}

pub fn vectorize(rho: &Op16) -> Vec<C64> {
    let mut v = Vec::with_capacity(SUPER_DIM);
    for j in 0..16 {
        for i in 0..16 {
            v.push(rho[(i, j)]);
        }
    }
    v
}

pub fn unvectorize(v: &[C64]) -> Op16 {
    Op16::from_fn(|i, j| v[i + 16 * j])
}
