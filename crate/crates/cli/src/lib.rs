//! Plumbing behind the `sparsegeom` binary: input parsing, run configuration,
//! query and oracle-check drivers, benchmarks and reduction runners.

pub mod bench;
pub mod config;
mod error;
pub mod io;
pub mod record;
pub mod run;

pub use error::CliError;

/// Library version echoed into every output record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
