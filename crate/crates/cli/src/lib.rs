//! Command-line front end: JSON state files in, JSON or text reports out.
//!
//! Exit codes: 0 success, 1 input or parse error, 2 infeasible input or
//! violated precondition, 3 numerical failure.

pub mod commands;
pub mod error;
pub mod report;
pub mod state_file;

pub use commands::{dispatch, run, Cli, Command, Outcome};
pub use error::CliError;
pub use report::Report;
pub use state_file::{parse_shared_file, parse_state_file, SharedFile, StateFile};
