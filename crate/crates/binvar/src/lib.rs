//! Command line, JSON formats, catalog cache and search checkpoints for
//! `binvar-core`.

pub mod cache;
pub mod checkpoint;
pub mod cli;
pub mod commands;
pub mod formats;
pub mod report;
pub mod suite;

pub use cli::Cli;
pub use report::{Outcome, Report};
