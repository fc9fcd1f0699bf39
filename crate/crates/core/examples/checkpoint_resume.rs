//! Save a world halfway, restore it, and check the resumed run matches an
//! uninterrupted one event for event.

use foldmesh::engine::{checkpoint, restore, FreeCounts, World};
use foldmesh::geometry::MachineType;
use foldmesh::params::SimParams;
use foldmesh::seedlab::parse_seed;

fn main() {
    let sim = SimParams::default().with_container(20.0, 20.0);
    let free: FreeCounts = [(MachineType::T2, 12)].into();
    let seed = parse_seed("2-2-2").unwrap();

    let mut straight = World::init(sim, &seed, &free, 11).unwrap();
    let expected = straight.run_collect(6000).unwrap();

    let mut first = World::init(sim, &seed, &free, 11).unwrap();
    let mut got = first.run_collect(2500).unwrap();
    let bytes = checkpoint(&first);
    println!("checkpoint at step {}: {} bytes", first.step_number(), bytes.len());
    drop(first);

    let mut resumed = restore(&bytes).unwrap();
    got.extend(resumed.run_collect(3500).unwrap());

    println!("{} events uninterrupted, {} with a restore", expected.len(), got.len());
    println!("identical: {}", got == expected && checkpoint(&resumed) == checkpoint(&straight));
}
