//! Command-line front end for `fracbvp`: expression, config and range
//! parsers plus the `solve`, `classify`, `sweep`, `green-check` and `poly`
//! commands.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 numerical failure.

pub mod app;
pub mod config;
pub mod expr;
pub mod range;

pub use app::{run, Cli, Command, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
pub use config::{ConfigError, RunConfig};
pub use expr::{parse_expr, Expr, Fault, ParseError};
pub use range::{Range, RangeError};
