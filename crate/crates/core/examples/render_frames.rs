//! Write an SVG frame every few thousand steps.
//!
//! cargo run --release --example render_frames -- [out_dir]

use std::path::PathBuf;

use foldmesh::engine::{FreeCounts, World};
use foldmesh::geometry::MachineType;
use foldmesh::io::render_svg;
use foldmesh::params::SimParams;
use foldmesh::seedlab::parse_seed;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| PathBuf::from("frames"), PathBuf::from);
    std::fs::create_dir_all(&dir)?;
    let sim = SimParams::default().with_container(20.0, 20.0);
    let free: FreeCounts = [(MachineType::T2, 12)].into();
    let mut world = World::init(sim, &parse_seed("2-2-2").unwrap(), &free, 3).unwrap();
    for frame in 0..=8 {
        let path = dir.join(format!("frame-{frame:02}.svg"));
        std::fs::write(&path, render_svg(&world))?;
        println!("{} (step {})", path.display(), world.step_number());
        world.run_collect(2500).unwrap();
    }
    Ok(())
}
