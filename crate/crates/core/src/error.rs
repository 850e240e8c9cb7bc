// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("atom index must be 1 or 2, got {0}")]
    AtomIndex(usize),

    #[error("separation must satisfy k0*r > 0, got xi = {0}")]
    NonPositiveSeparation(f64),

    #[error("steady state is not unique: {0}")]
    DegenerateSteadyState(String),

    #[error("integrator unstable at t = {time_s:e} s: {reason}")]
    Unstable { time_s: f64, reason: String },

    #[error("matrix (R + i*omega) is singular at omega = {0}")]
    SingularSpectrum(f64),

    #[error("spectral analysis: {0}")]
    Spectral(String),

    #[error("fit did not converge after {restarts} restarts (best residual norm {best_residual:e})")]
    FitFailed { restarts: usize, best_residual: f64 },

    #[error("closed-form shifts need a coupling tensor diagonal in x, y, z (off-diagonal norm {0:e})")]
    NonDiagonalCoupling(f64),

    #[error("config: {0}")]
    Config(String),

    #[error("missing required field `{0}`")]
    MissingField(String),

    #[error("{context}: {source}")]
    Io {
        context: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Format { context: PathBuf, message: String },

    #[error("sweep point {index} ({value}): {source}")]
    SweepPoint {
        index: usize,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { context: path.into(), source }
    }

    /// True for errors caused by user input rather than by a failing computation.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Config(_) | Error::MissingField(_) | Error::InvalidParameter { .. } => true,
            Error::SweepPoint { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}
