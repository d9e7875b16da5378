//! Library side of the `wbsolve` command: argument definitions, the
//! snapshot CSV format and the subcommands.

pub mod args;
pub mod commands;
pub mod csv;
pub mod error;

pub use error::{CliError, Result};
