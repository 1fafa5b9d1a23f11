//! Library side of the `zetadef` command-line tool: configuration
//! resolution, the command implementations themselves, and CSV rendering.
//! The binary in `main.rs` is a thin argument-parsing wrapper, so everything
//! here is drivable from tests.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{ConfigFile, Settings};
pub use error::{CliError, CliResult};
pub use output::Table;
pub use run::{experiments, RateOutcome};
