//! Seed "2-2-2" in a small soup of type-2 machines, run until the gene
//! first splits.
//!
//! cargo run --release --example replicate_triangle -- [rng_seed]

use std::ops::ControlFlow;

use foldmesh::engine::{FreeCounts, World};
use foldmesh::events::{Event, EventKind};
use foldmesh::geometry::MachineType;
use foldmesh::params::SimParams;
use foldmesh::seedlab::parse_seed;

fn main() {
    let rng_seed = std::env::args().nth(1).map_or(3, |s| s.parse().expect("rng seed"));
    let sim = SimParams::default().with_container(20.0, 20.0);
    let free: FreeCounts = [(MachineType::T2, 12)].into();
    let mut world = World::init(sim, &parse_seed("2-2-2").unwrap(), &free, rng_seed).unwrap();

    let mut split: Option<Event> = None;
    world
        .run(100_000, &mut |_: &World, events: &[Event]| {
            for e in events.iter().filter(|e| e.kind != EventKind::BondBroken) {
                println!("{:>6}  {:<12} {:?}", e.step, e.kind, e.subjects.iter().map(|m| m.0).collect::<Vec<_>>());
            }
            split = events.iter().find(|e| e.kind == EventKind::Split).cloned();
            if split.is_some() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();

    let Some(split) = split else {
        println!("no split within 100000 steps");
        return;
    };
    println!(
        "split at step {}: parent {} [{}], child {} [{}]",
        split.step, split.detail["parent"], split.detail["parent_ids"], split.detail["child"], split.detail["child_ids"]
    );
}
