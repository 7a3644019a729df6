//! Config-driven command-line front end for the dyad library.
//!
//! Commands read a single JSON config document, run one analysis and emit
//! figure-ready CSV or JSON. Flags override config fields, which override
//! built-in defaults. Outputs are written atomically (temp file + rename)
//! and contain no timestamps, so reruns of the same config are
//! byte-identical.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

pub use cli::run;
pub use config::{AppError, RunConfig};
