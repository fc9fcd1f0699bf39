//! Seed "2-2-2" among 54 free type-2 machines: genes replicate, copies
//! fold into triangles and the triangles join into a mesh.
//!
//! cargo run --release --example mesh_growth -- [steps] [rng_seed]

use foldmesh::engine::{FreeCounts, World};
use foldmesh::geometry::MachineType;
use foldmesh::io::summarize;
use foldmesh::params::SimParams;
use foldmesh::seedlab::parse_seed;

fn main() {
    let mut args = std::env::args().skip(1);
    let steps: u64 = args.next().map_or(400_000, |s| s.parse().expect("steps"));
    let rng_seed: u64 = args.next().map_or(1, |s| s.parse().expect("rng seed"));

    let free: FreeCounts = [(MachineType::T2, 54)].into();
    let mut world = World::init(SimParams::default(), &parse_seed("2-2-2").unwrap(), &free, rng_seed).unwrap();
    let mut log = Vec::new();

    println!("{:>8} {:>6} {:>6} {:>7} {:>7} {:>5}", "step", "free", "genes", "folded", "in mesh", "mesh");
    let every = (steps / 10).max(1);
    while world.step_number() < steps {
        let n = every.min(steps - world.step_number());
        log.extend(world.run_collect(n).unwrap());
        let s = summarize(world.step_number(), world.machines(), &log).unwrap();
        println!(
            "{:>8} {:>6} {:>6} {:>7} {:>7} {:>5}",
            s.timestep, s.free_machines, s.genes_remaining, s.phenes_folded, s.phenes_in_mesh, s.largest_mesh_size
        );
    }
}
