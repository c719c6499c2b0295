//! Seeded parameter sweeps over both engines and their CSV output.
//!
//! A sweep is the Cartesian product of the density, `tau`, `epsilon` and
//! `eta` lists, evaluated in every window. Each (point, window) cell gets its
//! own seed from [`point_seed`], so any row can be reproduced alone.

mod config;
mod csv;
mod presets;
mod sweep;

pub use config::{log_grid, parse_config, parse_config_onto, Engines, H1Choice, SweepConfig};
pub use csv::{emit_csv, format_value, write_csv, CSV_COLUMNS};
pub use presets::{figure_preset, PRESET_NAMES};
pub use sweep::{
    dump_snapshots, point_seed, run_sweep, sweep_points, SweepPoint, SweepRow, H1_BIN_WIDTH, H1_CALIBRATION_REPS, H1_EXTENT,
};
