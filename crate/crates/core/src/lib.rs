pub mod engine;
pub mod events;
pub mod geometry;
pub mod io;
pub mod params;
pub mod physics;
pub mod rulebook;
pub mod seedlab;
