//! Command-line front end for `hopfion-core`: argument parsing, tables in
//! CSV/JSON, legacy-VTK field export and the figure datasets.

pub mod args;
pub mod error;
pub mod field;
pub mod figures;
pub mod run;
pub mod table;

pub use error::CliError;
pub use run::{execute, run_cli, Outcome, RunSpec, Task};
