//! Library behind the `cdk` binary: JSON schema, commands and SVG output.

pub mod commands;
pub mod error;
pub mod io;
pub mod schema;
pub mod svg;

pub use error::{CliError, CliResult};
