//! Reading and writing everything that leaves the simulator: configs,
//! traces, frames and summaries.

pub mod analysis;
pub mod config;
pub mod driver;
pub mod render;
pub mod trace;

pub use analysis::{derive_strands, mesh_sizes, summarize, Strand, StrandClass, SummaryRecord, TopologyError};
pub use config::{config_path, load_config, load_config_str, ConfigError, ConfigOverrides, RunConfig, CONFIG_ENV};
pub use driver::{drive, run_to_dir, run_to_dir_until, RunError, RunReport};
pub use render::{render_machines, render_svg, RenderOptions};
pub use trace::{read_trace, write_trace, TraceWriter};
