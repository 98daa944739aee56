//! Command-line front end for `monocount`: equation files, reports, and the
//! `count`, `bench` and `gauss` subcommands.

pub mod commands;
pub mod equation;
pub mod report;

pub use commands::{run, CliError};
pub use equation::{format_equation, parse_equation, ParseError};
