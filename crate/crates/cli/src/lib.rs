//! Command-line front end for the `erdos728-core` toolkit.
//!
//! Parallel range orchestration, configuration files, the Figure 1 dataset,
//! and byte-stable CSV/JSON emission live here; every mathematical predicate
//! comes from the core crate.

pub mod cli;
pub mod config;
pub mod emit;
pub mod error;
pub mod figure1;
pub mod parallel;
pub mod parse;
pub mod report;

pub use error::CliError;
