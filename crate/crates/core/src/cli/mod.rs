//! Scenario-driven report generation behind the `pdnlab` binary.
//!
//! ```text
//! pdnlab <topology|aperture|array|compare|report> --config <path> --out <dir> [--seed <u64>]
//! ```
//!
//! Each subcommand writes CSV tables (6 significant digits, `\n` line
//! endings, fixed row order), optional SVG plots, an `errors.csv` listing
//! rows that could not be computed, and a `manifest.txt` of SHA-256 digests.
//! Identical scenarios produce byte-identical output.

mod checks;
mod config;
mod format;
mod run;
mod svg;

pub use checks::{acceptance_checks, Check};
pub use config::{
    parse_config, parse_config_str, ApertureConfig, ArrayConfig, ConfigError, ElementConfig,
    OutputConfig, PatternConfig, Resolved, ScenarioConfig, SweepConfig,
};
pub use format::{fmt_sig, Table};
pub use run::{run, ErrorRow, OutputFile, ReportBundle, RunError, Subcommand, ERRORS, MANIFEST};
pub use svg::{emit_svg_plot, PlotError, PlotStyle, Series};
