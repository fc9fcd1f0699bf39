//! The three ways a strand gets torn down: a broken bond shatters it,
//! overlapping phenes make one of them unfold, and a loop held out of
//! shape for too long unfolds from stress.

use foldmesh::engine::scenario::folded_loop;
use foldmesh::engine::World;
use foldmesh::events::{Event, EventKind};
use foldmesh::geometry::{ArmKind, MachineBody, Vec2};
use foldmesh::params::SimParams;
use foldmesh::rulebook::{MachineId, MachineState};
use foldmesh::seedlab::parse_seed;

fn quiet() -> SimParams {
    let mut sim = SimParams::default().with_container(30.0, 30.0);
    sim.physics = sim.physics.drag_only();
    sim
}

fn show(title: &str, events: &[Event]) {
    println!("{title}");
    for e in events.iter().filter(|e| !matches!(e.kind, EventKind::BondFormed)) {
        println!("  {:>5}  {:<12} {:?}", e.step, e.kind, e.subjects.iter().map(|m| m.0).collect::<Vec<_>>());
    }
}

fn triangle(first: u32, cx: f64, cy: f64) -> Vec<MachineState> {
    folded_loop(first, &parse_seed("2-2-2").unwrap(), Vec2::new(cx, cy), &MachineBody::default()).unwrap()
}

fn main() {
    // a gene loses a middle bond
    let mut world = World::init(quiet(), &parse_seed("2-2-2-2-2").unwrap(), &Default::default(), 1).unwrap();
    world.edit(MachineId(2), |m| m.internal.seed_gene = false);
    world.sever_bond(MachineId(2), ArmKind::Left);
    show("bond removed from machine 2", &world.run_collect(10).unwrap());

    // two phenes on top of each other
    let mut machines = triangle(0, 15.0, 15.0);
    machines.extend(triangle(3, 15.1, 15.0));
    for m in &mut machines {
        m.internal.in_mesh = true;
    }
    let mut world = World::from_machines(quiet(), machines, 1).unwrap();
    let events = world.run_collect(200).unwrap();
    show("two triangles overlapping", &events);

    // a phene held out of shape
    let machines = triangle(0, 15.0, 15.0);
    // machine 1 stays put while machine 0 is turned against it
    let mut pinned = machines[0].pose;
    pinned.heading += 0.6;
    let anchor = machines[1].pose;
    let mut world = World::from_machines(quiet(), machines, 1).unwrap();
    let limit = world.params().rules.stress_limit;
    let mut events = Vec::new();
    for _ in 0..limit + 5 {
        world.set_pose(MachineId(0), pinned);
        world.set_pose(MachineId(1), anchor);
        events.extend(world.step().unwrap());
    }
    show(&format!("machine 0 held twisted for {} steps", limit + 5), &events);
}
