//! Scenario runner for finite-distance scattering tables.
//!
//! A scenario names a potential (or explicit phase shifts), a wavenumber, a
//! set of radii and an angular grid; each requested output becomes one CSV or
//! JSON table, and every run leaves a `manifest.json` that records the
//! resolved config, its hash and the series truncation diagnostics.

pub mod config;
pub mod error;
pub mod scenario;
pub mod table;

pub use config::{Format, OutputKind, ScenarioConfig};
pub use error::CliError;
pub use scenario::{compare_asymptotic, compute_tables, run_outputs, run_scenario, Manifest};
