// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-dimensional Ornstein–Uhlenbeck model of a single precessing spin,
//! Ṡ = R S + √A η with R = [[−γ, ω_L], [−ω_L, −γ]].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::{Hygiene, TimeTrace, TraceMode};

/// Largest internal step keeping the Euler–Maruyama damping bias ω_L² h/(2γ) at or below 0.5 %.
pub fn ou_max_substep(gamma: f64, larmor: f64) -> f64 {
    if larmor == 0.0 {
        0.01 / gamma
    } else {
        (0.01 * gamma / (larmor * larmor)).min(0.01 / gamma)
    }
}

/// Euler–Maruyama integration sampled every `dt` for a duration `t`; returns S_z.
///
/// Internally steps at `dt / n` with n chosen from [`ou_max_substep`]. The state starts at
/// the origin.
pub fn ou_reference_trace(gamma: f64, larmor: f64, amplitude: f64, dt: f64, t: f64, seed: u64) -> Result<TimeTrace> {
    let substeps = (dt / ou_max_substep(gamma, larmor)).ceil().max(1.0) as usize;
    ou_trace_with_substeps(gamma, larmor, amplitude, dt, t, seed, substeps, [0.0, 0.0])
}

/// As [`ou_reference_trace`] with an explicit substep count and initial (S_y, S_z).
#[allow(clippy::too_many_arguments)]
pub fn ou_trace_with_substeps(
    gamma: f64,
    larmor: f64,
    amplitude: f64,
    dt: f64,
    t: f64,
    seed: u64,
    substeps: usize,
    start: [f64; 2],
) -> Result<TimeTrace> {
    if !(gamma > 0.0) {
        return Err(Error::param("gamma", format!("must be > 0, got {gamma}")));
    }
    if !(dt > 0.0 && t >= dt && amplitude >= 0.0 && substeps >= 1) {
        return Err(Error::param("dt", "need dt > 0, t >= dt, amplitude >= 0, substeps >= 1"));
    }
    let n = (t / dt).round() as usize;
    let h = dt / substeps as f64;
    let kick = (amplitude * h).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [mut sy, mut sz] = start;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        samples.push(sz);
        for _ in 0..substeps {
            let e1: f64 = StandardNormal.sample(&mut rng);
            let e2: f64 = StandardNormal.sample(&mut rng);
            let dy = (-gamma * sy + larmor * sz) * h + kick * e1;
            let dz = (-larmor * sy - gamma * sz) * h + kick * e2;
            sy += dy;
            sz += dz;
        }
    }
    Ok(TimeTrace {
        dt,
        samples,
        conformation_log: Vec::new(),
        seed,
        mode: TraceMode::OuReference,
        hygiene: Hygiene::default(),
    })
}
