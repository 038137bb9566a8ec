//! Config files, PPM rendering and CSV persistence.

mod config;
mod ppm;
mod table;

pub use config::{Config, ExperimentConfig, ModelConfig, NeighborhoodConfig, PeriodValue, RenderConfig, SpeciesConfig};
pub use ppm::{Image, EMPTY_RGB};
pub use table::{append_sim_summary, read_scan_rows, sim_summary, write_scan_rows, ScanAppender};
