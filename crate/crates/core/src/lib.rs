// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin-noise spectra of dipole-dipole coupled atom pairs.
//!
//! - [`qcore`]: single- and two-atom operators and Hamiltonians
//! - [`coupling`]: Green's dyadic, coupling tensors, pair-geometry sampling
//! - [`dynamics`]: Liouvillian, steady state, stochastic time traces
//! - [`spectral`]: PSD estimation, lineshape models, least-squares fits
//! - [`perturbation`]: dressed-state perturbation theory and exact diagonalization
//! - [`harness`]: configuration-driven experiment recipes and result files

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod perturbation;
pub mod qcore;
pub mod spectral;

pub use error::{Error, Result};
