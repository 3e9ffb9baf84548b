//! Configuration, presets and the deterministic sweep engine behind the CLI.

mod config;
pub mod format;
mod run;

pub use config::{parse_config, Mode, Preset, RawConfig, SweepParam, SweepSpec, CONFIG_KEYS};
pub use run::{run, series_csv, sweep2d_csv, time_grid, RunOutcome};
