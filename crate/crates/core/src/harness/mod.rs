// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Configuration-driven experiment recipes, seeded parallel ensembles, result files and
//! the command-line front end.

pub mod cli;
pub mod config;
pub mod report;
pub mod results;
pub mod run;

pub use cli::cli;
pub use config::{ExperimentConfig, GeometryKind, Recipe};
pub use report::{report, write_report};
pub use results::{read_results, write_results};
pub use run::{run_experiment, run_experiment_on, run_points, trace_seed, PointResult, ResultSet, Scalars};
