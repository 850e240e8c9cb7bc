// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Stochastic integration of dρ = L[ρ] dt + f √dt.

use log::warn;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coupling::{sample_conformation, AngleSampling, Conformation, CouplingTensors};
use crate::error::{Error, Result};
use crate::qcore::{build_single_atom_ops, total_sz, Op16, SimulationParams, SingleAtomOps, C64};

use super::basis::{Parity, SwapBasis};
use super::liouvillian::Liouvillian;
use super::noise::{draw_gaussians, noise_increment, projected_generators, NOISE_CHANNELS};
use super::steady::{steady_state_from_block, trace_functional};
use super::{min_eigenvalue, ConformationEvent, DensityMatrix16, Hygiene, TimeTrace, TraceMode, NEGATIVITY_TOLERANCE};

/// Pair geometry during a trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Geometry {
    /// Fixed conformation for the whole trace.
    Fixed { conformation: Conformation },
    /// Infinitely separated atoms.
    Decoupled,
    /// Fresh nearest-neighbour conformation every τ_c.
    Resampled { angles: AngleSampling },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Exact propagator exp(L h) over each sample interval, noise added once per interval.
    #[default]
    Exponential,
    /// Runge–Kutta 4 for L with Euler–Maruyama noise at step `dt`.
    Rk4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub geometry: Geometry,
    pub integrator: Integrator,
    /// Discarded integration time before the first sample (s).
    pub burn_in: f64,
    /// Also propagate the exchange-odd part of ρ so positivity is checked on the full state.
    pub full_state: bool,
    /// Check the smallest eigenvalue of ρ every this many samples; 0 disables the check.
    pub positivity_every: usize,
}

impl TraceOptions {
    pub fn new(geometry: Geometry) -> Self {
        TraceOptions {
            geometry,
            integrator: Integrator::Exponential,
            burn_in: 0.0,
            full_state: false,
            positivity_every: 0,
        }
    }
}

fn mode_of(g: &Geometry) -> TraceMode {
    match g {
        Geometry::Resampled { .. } => TraceMode::Dynamic,
        _ => TraceMode::Static,
    }
}

fn steps(duration: f64, h: f64) -> usize {
    (duration / h).round() as usize
}

/// Integer number of sample intervals per conformation lifetime.
pub fn steps_per_conformation(tau_c: f64, h: f64) -> Result<usize> {
    let ratio = tau_c / h;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-6 * ratio {
        return Err(Error::param(
            "tau_c",
            format!("must be a positive integer multiple of the sample interval ({h:e} s), got {tau_c:e} s"),
        ));
    }
    Ok(n as usize)
}

struct Driver<'a> {
    p: &'a SimulationParams,
    opts: &'a TraceOptions,
    ops: SingleAtomOps,
    rng: ChaCha8Rng,
}

impl Driver<'_> {
    fn conformation(&mut self) -> Option<Conformation> {
        match self.opts.geometry {
            Geometry::Fixed { conformation } => Some(conformation),
            Geometry::Decoupled => None,
            Geometry::Resampled { angles } => {
                Some(sample_conformation(self.p.density_per_cm3, self.p.k0, angles, &mut self.rng))
            }
        }
    }

    fn liouvillian(&self, c: Option<&Conformation>) -> Result<Liouvillian> {
        let t = match c {
            Some(c) => CouplingTensors::new(c, self.p.gamma0)?,
            None => CouplingTensors::decoupled(),
        };
        Ok(Liouvillian::new(self.p, &t, &self.ops))
    }
}

/// Integrates one noisy trace of ⟨S_z⟩ sampled every `p.sample_interval`.
///
/// The state starts in the steady state of the first conformation. Identical
/// (params, options, seed) give bit-identical traces.
pub fn simulate_trace(p: &SimulationParams, opts: &TraceOptions, seed: u64) -> Result<TimeTrace> {
    p.validate()?;
    let h = p.sample_interval;
    let n_samples = steps(p.trace_duration, h);
    if n_samples < 2 {
        return Err(Error::param("trace_duration", "shorter than two samples"));
    }
    let per_conf = match opts.geometry {
        Geometry::Resampled { .. } => Some(steps_per_conformation(p.tau_c, h)?),
        _ => None,
    };
    let mut burn = steps(opts.burn_in.max(0.0), h);
    if let Some(n) = per_conf {
        burn = burn.div_ceil(n) * n;
    }
    let mut driver = Driver { p, opts, ops: build_single_atom_ops(), rng: ChaCha8Rng::seed_from_u64(seed) };
    let plan = Plan { h, n_samples, burn, per_conf };
    let (samples, conformation_log, hygiene) = match opts.integrator {
        Integrator::Exponential => run_exponential(&mut driver, &plan)?,
        Integrator::Rk4 => run_rk4(&mut driver, &plan)?,
    };
    Ok(TimeTrace { dt: h, samples, conformation_log, seed, mode: mode_of(&opts.geometry), hygiene })
}

struct Plan {
    h: f64,
    n_samples: usize,
    burn: usize,
    per_conf: Option<usize>,
}

impl Plan {
    fn total(&self) -> usize {
        self.burn + self.n_samples
    }

    fn time(&self, step: usize) -> f64 {
        (step as f64 - self.burn as f64) * self.h
    }

    fn resample_at(&self, step: usize) -> bool {
        matches!(self.per_conf, Some(n) if step > 0 && step % n == 0)
    }

    fn record_at(&self, step: usize) -> Option<usize> {
        step.checked_sub(self.burn)
    }
}

type Outcome = (Vec<f64>, Vec<ConformationEvent>, Hygiene);

fn unstable(time_s: f64, reason: impl Into<String>) -> Error {
    Error::Unstable { time_s, reason: reason.into() }
}

struct Blocks {
    even: DMatrix<f64>,
    odd: Option<DMatrix<f64>>,
}

fn blocks(l: &Liouvillian, full: bool) -> Blocks {
    let basis = SwapBasis::get();
    Blocks { even: basis.project(l, Parity::Even), odd: full.then(|| basis.project(l, Parity::Odd)) }
}

fn run_exponential(d: &mut Driver, plan: &Plan) -> Result<Outcome> {
    let basis = SwapBasis::get();
    let full = d.opts.full_state;
    let sz_even = basis.coords(Parity::Even, &total_sz(&d.ops));
    let t = trace_functional();
    let gen_even = projected_generators(Parity::Even);
    let gen_odd = full.then(|| projected_generators(Parity::Odd));
    let scale = d.p.noise_amplitude * plan.h.sqrt();

    let mut log = Vec::new();
    let mut hygiene = Hygiene::new(full);
    let mut samples = Vec::with_capacity(plan.n_samples);

    let c = d.conformation();
    let b = blocks(&d.liouvillian(c.as_ref())?, full);
    let mut x = steady_state_from_block(&b.even)?;
    let mut y = DVector::<f64>::zeros(basis.odd.len());
    if let Some(c) = c {
        log.push(ConformationEvent { time: plan.time(0), conformation: c, steady_sz: Some(sz_even.dot(&x)) });
    }
    let mut prop_even = (&b.even * plan.h).exp();
    let mut prop_odd = b.odd.map(|o| (o * plan.h).exp());

    for step in 0..plan.total() {
        if plan.resample_at(step) {
            let c = d.conformation().expect("resampled geometry");
            let b = blocks(&d.liouvillian(Some(&c))?, full);
            let steady_sz = steady_state_from_block(&b.even).ok().map(|s| sz_even.dot(&s));
            log.push(ConformationEvent { time: plan.time(step), conformation: c, steady_sz });
            prop_even = (&b.even * plan.h).exp();
            prop_odd = b.odd.map(|o| (o * plan.h).exp());
        }
        if let Some(k) = plan.record_at(step) {
            let sz = sz_even.dot(&x);
            if !sz.is_finite() || sz.abs() > 1.0 {
                return Err(unstable(plan.time(step), format!("<S_z> = {sz}")));
            }
            samples.push(sz);
            if d.opts.positivity_every > 0 && k % d.opts.positivity_every == 0 {
                let rho = basis.matrix(&x, full.then_some(&y));
                check_positivity(&rho, &mut hygiene, plan.time(step));
            }
        }
        if step + 1 == plan.total() {
            break;
        }
        let g = draw_gaussians(&mut d.rng);
        for m in 0..NOISE_CHANNELS {
            x.axpy(scale * g[m], &gen_even[m], 1.0);
            if let Some(go) = &gen_odd {
                y.axpy(scale * g[m], &go[m], 1.0);
            }
        }
        x = &prop_even * &x;
        if let Some(po) = &prop_odd {
            y = po * &y;
        }
        let tr = t.dot(&x);
        if !tr.is_finite() {
            return Err(unstable(plan.time(step + 1), "non-finite trace"));
        }
        hygiene.max_trace_drift = hygiene.max_trace_drift.max((tr - 1.0).abs());
        x /= tr;
        y /= tr;
        hygiene.max_trace_error = hygiene.max_trace_error.max((t.dot(&x) - 1.0).abs());
    }
    Ok((samples, log, hygiene))
}

fn check_positivity(rho: &Op16, hygiene: &mut Hygiene, time: f64) {
    let min = min_eigenvalue(rho);
    hygiene.eigenvalue_checks += 1;
    hygiene.min_eigenvalue = hygiene.min_eigenvalue.min(min);
    if min < NEGATIVITY_TOLERANCE {
        if hygiene.negative_eigenvalue_events == 0 {
            warn!("density matrix eigenvalue {min:e} at t = {time:e} s");
        }
        hygiene.negative_eigenvalue_events += 1;
    }
}

fn rk4_step(l: &Liouvillian, rho: &Op16, dt: f64) -> Op16 {
    let half = C64::new(dt / 2.0, 0.0);
    let k1 = l.apply(rho);
    let k2 = l.apply(&(rho + k1 * half));
    let k3 = l.apply(&(rho + k2 * half));
    let k4 = l.apply(&(rho + k3 * C64::new(dt, 0.0)));
    rho + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0)
}

fn run_rk4(d: &mut Driver, plan: &Plan) -> Result<Outcome> {
    let basis = SwapBasis::get();
    let sz_op = total_sz(&d.ops);
    let sz_even = basis.coords(Parity::Even, &sz_op);
    let substeps = (plan.h / d.p.dt).ceil().max(1.0) as usize;
    let dt = plan.h / substeps as f64;

    let mut log = Vec::new();
    let mut hygiene = Hygiene::new(true);
    let mut samples = Vec::with_capacity(plan.n_samples);

    let c = d.conformation();
    let mut l = d.liouvillian(c.as_ref())?;
    let check = |l: &Liouvillian| {
        let sub = SimulationParams { dt, ..d.p.clone() };
        sub.check_resolution(l.rate_scale())
    };
    check(&l)?;
    let l_even = SwapBasis::get().project(&l, Parity::Even);
    let x = steady_state_from_block(&l_even)?;
    let mut state = DensityMatrix16::new(basis.matrix(&x, None));
    if let Some(c) = c {
        log.push(ConformationEvent { time: plan.time(0), conformation: c, steady_sz: Some(sz_even.dot(&x)) });
    }

    for step in 0..plan.total() {
        if plan.resample_at(step) {
            let c = d.conformation().expect("resampled geometry");
            l = d.liouvillian(Some(&c))?;
            check(&l)?;
            let l_even = basis.project(&l, Parity::Even);
            let steady_sz = steady_state_from_block(&l_even).ok().map(|s| sz_even.dot(&s));
            log.push(ConformationEvent { time: plan.time(step), conformation: c, steady_sz });
        }
        if let Some(k) = plan.record_at(step) {
            let sz = state.expectation(&sz_op);
            if !sz.is_finite() || sz.abs() > 1.0 {
                return Err(unstable(plan.time(step), format!("<S_z> = {sz}")));
            }
            samples.push(sz);
            if d.opts.positivity_every > 0 && k % d.opts.positivity_every == 0 {
                check_positivity(&state.rho, &mut hygiene, plan.time(step));
            }
        }
        if step + 1 == plan.total() {
            break;
        }
        for _ in 0..substeps {
            let mut next = rk4_step(&l, &state.rho, dt);
            next += noise_increment(&mut d.rng, d.p.noise_amplitude, dt);
            let mut s = DensityMatrix16::new(next);
            hygiene.max_hermiticity_defect = hygiene.max_hermiticity_defect.max(s.hermiticity_defect());
            s.symmetrize();
            let tr = s.trace();
            if !tr.is_finite() {
                return Err(unstable(plan.time(step), "non-finite trace"));
            }
            hygiene.max_trace_drift = hygiene.max_trace_drift.max((tr - 1.0).abs());
            s.renormalize();
            hygiene.max_trace_error = hygiene.max_trace_error.max((s.trace() - 1.0).abs());
            state = s;
        }
    }
    Ok((samples, log, hygiene))
}
