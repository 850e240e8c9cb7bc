// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Master-equation dynamics of the driven, dipole-coupled pair.

pub mod basis;
pub mod linear;
pub mod liouvillian;
pub mod noise;
pub mod ou;
pub mod propagate;
pub mod steady;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::coupling::Conformation;
use crate::qcore::{hermiticity_defect, Op16, C64};

pub use liouvillian::{Liouvillian, SUPER_DIM};
pub use noise::noise_increment;
pub use ou::ou_reference_trace;
pub use propagate::{simulate_trace, Geometry, Integrator, TraceOptions};
pub use steady::{steady_state, steady_state_by_propagation};

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix16 {
    pub rho: Op16,
}

impl DensityMatrix16 {
    pub fn new(rho: Op16) -> Self {
        DensityMatrix16 { rho }
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.rho)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.rho)
    }

    pub fn expectation(&self, op: &Op16) -> f64 {
        (self.rho * op).trace().re
    }

    /// (ρ + ρ†)/2.
    pub fn symmetrize(&mut self) {
        self.rho = (self.rho + self.rho.adjoint()) * C64::new(0.5, 0.0);
    }

    pub fn renormalize(&mut self) {
        let t = self.trace();
        self.rho /= C64::new(t, 0.0);
    }
}

pub fn min_eigenvalue(rho: &Op16) -> f64 {
    let herm = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(herm).eigenvalues.min()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMode {
    Static,
    Dynamic,
    OuReference,
}

/// A conformation switch and the steady-state ⟨S_z⟩ it relaxes toward.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformationEvent {
    /// Time relative to the first recorded sample (s); negative during burn-in.
    pub time: f64,
    pub conformation: Conformation,
    pub steady_sz: Option<f64>,
}

/// Numerical health of an integration.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Hygiene {
    /// Largest |Tr ρ − 1| before renormalization.
    pub max_trace_drift: f64,
    /// Largest |Tr ρ − 1| after renormalization.
    pub max_trace_error: f64,
    /// Largest ‖ρ − ρ†‖_max before symmetrization.
    pub max_hermiticity_defect: f64,
    /// +∞ until the first eigenvalue check; stored as `null` then.
    #[serde(with = "unchecked_as_null")]
    pub min_eigenvalue: f64,
    pub eigenvalue_checks: usize,
    pub negative_eigenvalue_events: usize,
    /// Whether `min_eigenvalue` refers to the full state or only its exchange-even part.
    pub full_state: bool,
}

impl Hygiene {
    pub fn new(full_state: bool) -> Self {
        Hygiene { min_eigenvalue: f64::INFINITY, full_state, ..Hygiene::default() }
    }

    pub fn merge(&mut self, other: &Hygiene) {
        self.max_trace_drift = self.max_trace_drift.max(other.max_trace_drift);
        self.max_trace_error = self.max_trace_error.max(other.max_trace_error);
        self.max_hermiticity_defect = self.max_hermiticity_defect.max(other.max_hermiticity_defect);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
        self.eigenvalue_checks += other.eigenvalue_checks;
        self.negative_eigenvalue_events += other.negative_eigenvalue_events;
        self.full_state &= other.full_state;
    }
}

mod unchecked_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Threshold below which an eigenvalue of ρ counts as a positivity violation.
pub const NEGATIVITY_TOLERANCE: f64 = -1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeTrace {
    pub dt: f64,
    pub samples: Vec<f64>,
    pub conformation_log: Vec<ConformationEvent>,
    pub seed: u64,
    pub mode: TraceMode,
    pub hygiene: Hygiene,
}

impl TimeTrace {
    pub fn duration(&self) -> f64 {
        self.dt * self.samples.len() as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(|k| k as f64 * self.dt)
    }
}
