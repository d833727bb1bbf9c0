//! Command-line front end for `darboux-core`: the function expression
//! parser, CSV reports, command dispatch and the acceptance suite.

#![allow(clippy::result_large_err)]

pub mod commands;
pub mod parser;
pub mod report;
pub mod suite;

pub use commands::{execute, run, Cli, Command, Outcome};
pub use parser::{parse_funcspec, parse_primitive, ParseError};
pub use report::{to_csv_string, write_csv, Row};
pub use suite::{run_suite, SuiteReport};
