//! Command-line front end for `ghom-core`.

pub mod args;
pub mod commands;
pub mod docs;
pub mod error;
pub mod report;

pub use commands::{run, Outcome};
pub use error::CliError;
pub use report::Report;
