//! Command-line front end: configuration, dispatch and CSV output.

pub mod config;
pub mod output;
mod run;

pub use config::{parse_args, parse_config, ConfigError, FigureSel, Flags, Grid, Mode, RunConfig, SweepVar};
pub use output::{fmt_g17, Table};
pub use run::{emit_figure_data, run, Report, RunError};
