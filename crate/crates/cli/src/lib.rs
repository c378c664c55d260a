//! Batch front-end for the `zetamean` library.
//!
//! A run is described by a [`config::RunConfig`] (TOML file, preset and
//! command-line overrides) and resolved into a [`config::Plan`], which
//! [`run::execute`] turns into a CSV or JSON artifact.

pub mod config;
pub mod run;

pub use config::{load_config, Plan, RunConfig};
pub use run::{execute, execute_with_threads, run};
