// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qcore::{build_single_atom_ops, kron, Op16, C64};

use super::basis::{Parity, SwapBasis};
use super::liouvillian::Liouvillian;
use super::DensityMatrix16;

/// Pivot ratio below which the trace-augmented generator counts as singular.
const DEGENERACY_RATIO: f64 = 1e-12;

/// Trace functional t_k = Tr B_k on the even block.
pub fn trace_functional() -> DVector<f64> {
    SwapBasis::get().coords(Parity::Even, &Op16::identity())
}

/// Unique trace-one null vector of the even generator.
///
/// One row of L is replaced by the trace functional; a second null direction shows up as a
/// vanishing pivot of the full-pivot LU factorization.
pub fn steady_state_from_block(l_even: &DMatrix<f64>) -> Result<DVector<f64>> {
    let t = trace_functional();
    let row = t.iamax();
    let mut a = l_even.clone();
    a.set_row(row, &t.transpose());
    let mut rhs = DVector::zeros(t.len());
    rhs[row] = 1.0;
    let lu = a.full_piv_lu();
    let u = lu.u();
    let diag = u.diagonal().map(f64::abs);
    let (max, min) = (diag.max(), diag.min());
    if !(min > DEGENERACY_RATIO * max) {
        return Err(Error::DegenerateSteadyState(format!("pivot ratio {:e}", min / max)));
    }
    lu.solve(&rhs).ok_or_else(|| Error::DegenerateSteadyState("singular system".into()))
}

/// Null-space solve of the Liouvillian.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix16> {
    let basis = SwapBasis::get();
    let l_even = basis.project(l, Parity::Even);
    let x = steady_state_from_block(&l_even)?;
    Ok(DensityMatrix16::new(basis.matrix(&x, None)))
}

/// ρ_th ⊗ ρ_th with ρ_th = P_g/2.
pub fn thermal_state() -> Op16 {
    let ops = build_single_atom_ops();
    let half = ops.ground_projector * C64::new(0.5, 0.0);
    kron(&half, &half)
}

/// Result of the propagation fallback.
#[derive(Clone, Debug)]
pub struct RelaxedState {
    pub rho: DensityMatrix16,
    /// ‖L[ρ]‖_max / ‖L‖_max at termination.
    pub residual: f64,
    pub elapsed: f64,
}

/// Long-time propagation from the thermal state by repeated squaring of exp(L h).
///
/// Stops once the generator residual ‖L[ρ]‖_max relative to the generator scale drops below
/// `tol`, or after the propagated time exceeds `max_time`.
pub fn steady_state_by_propagation(l: &Liouvillian, tol: f64, max_time: f64) -> Result<RelaxedState> {
    let basis = SwapBasis::get();
    let l_even = basis.project(l, Parity::Even);
    let scale = l_even.amax().max(f64::MIN_POSITIVE);
    let mut h = 0.1 / scale;
    let mut p = (&l_even * h).exp();
    let mut x = basis.coords(Parity::Even, &thermal_state());
    let t = trace_functional();
    let mut elapsed = 0.0;
    loop {
        x = &p * &x;
        elapsed += h;
        x /= t.dot(&x);
        let residual = (&l_even * &x).amax() / scale;
        if residual < tol {
            return Ok(RelaxedState { rho: DensityMatrix16::new(basis.matrix(&x, None)), residual, elapsed });
        }
        if elapsed > max_time || !residual.is_finite() {
            return Err(Error::DegenerateSteadyState(format!("propagation residual {residual:e} after {elapsed:e} s")));
        }
        p = &p * &p;
        h *= 2.0;
    }
}
