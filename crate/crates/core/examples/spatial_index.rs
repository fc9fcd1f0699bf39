//! Grid and brute-force neighbour search agree; the grid is faster.

use std::time::Instant;

use foldmesh::engine::{FreeCounts, World};
use foldmesh::geometry::MachineType;
use foldmesh::params::SimParams;
use foldmesh::physics::IndexMode;
use foldmesh::seedlab::parse_seed;

fn timed(mode: IndexMode, steps: u64) -> (f64, World) {
    let sim = SimParams::default().with_container(80.0, 80.0);
    let free: FreeCounts = [(MachineType::T2, 250), (MachineType::T4, 247)].into();
    let mut world = World::init(sim, &parse_seed("2-2-2").unwrap(), &free, 5).unwrap();
    world.set_index_mode(mode);
    let t = Instant::now();
    world.run_collect(steps).unwrap();
    (t.elapsed().as_secs_f64(), world)
}

fn main() {
    let steps = 2000;
    let (grid, a) = timed(IndexMode::Grid, steps);
    let (brute, b) = timed(IndexMode::BruteForce, steps);
    println!("500 machines, {steps} steps");
    println!("grid         {grid:.2}s");
    println!("brute force  {brute:.2}s");
    println!("ratio        {:.2}", grid / brute);
    println!("same world   {}", a.machines() == b.machines());
}
