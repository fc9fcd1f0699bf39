//! The world and its step loop.

mod checkpoint;
pub mod scenario;
mod step;
mod world;

pub use checkpoint::{checkpoint, restore, CheckpointError, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use step::{arbitrate, strand_of, BondRequest, Observer, RunStats, StepError};
pub use world::{FreeCounts, InitError, World, WorldError};
