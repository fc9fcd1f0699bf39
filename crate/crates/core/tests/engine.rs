use foldmesh::engine::scenario::{folded_loop, straight_strand};
use foldmesh::engine::{arbitrate, checkpoint, restore, strand_of, BondRequest, FreeCounts, InitError, World};
use foldmesh::events::EventKind;
use foldmesh::geometry::{arm_tip, ArmKind, MachineBody, MachineType, Pose, Vec2};
use foldmesh::io::{derive_strands, StrandClass};
use foldmesh::params::SimParams;
use foldmesh::rulebook::{LinkKind, MachineId, MachineState};
use foldmesh::seedlab::parse_seed;
use proptest::prelude::*;

fn free(pairs: &[(MachineType, u32)]) -> FreeCounts {
    pairs.iter().copied().collect()
}

fn still() -> SimParams {
    let mut sim = SimParams::default().with_container(20.0, 20.0);
    sim.physics = sim.physics.drag_only();
    sim
}

#[test]
fn initial_triangle_soup() {
    let w = World::init(SimParams::default(), &parse_seed("2-2-2").unwrap(), &free(&[(MachineType::T2, 54)]), 1).unwrap();
    assert_eq!(w.len(), 57);
    let bonded: Vec<_> = w.machines().iter().filter(|m| !m.is_free()).collect();
    assert_eq!(bonded.len(), 3);
    assert!(bonded.iter().all(|m| m.internal.seed_gene && m.internal.seed_phene && !m.internal.folded));
    assert_eq!(w.step_number(), 0);
    // seed lies flat across the middle
    assert!(bonded.iter().all(|m| (m.pose.y - 20.0).abs() < 1e-12 && m.pose.heading == 0.0));
}

#[test]
fn seed_alone_is_a_valid_world() {
    let w = World::init(SimParams::default(), &parse_seed("2-2-2").unwrap(), &FreeCounts::new(), 1).unwrap();
    assert_eq!(w.len(), 3);
    w.check_invariants().unwrap();
}

#[test]
fn histogram_counts_seed_and_soup() {
    let w = World::init(
        SimParams::default(),
        &parse_seed("4-2-4-2").unwrap(),
        &free(&[(MachineType::T2, 100), (MachineType::T4, 100)]),
        2,
    )
    .unwrap();
    assert_eq!(w.len(), 204);
    assert_eq!(w.type_histogram(), free(&[(MachineType::T2, 102), (MachineType::T4, 102)]));
}

#[test]
fn crowded_container_names_the_deficit() {
    let sim = SimParams::default().with_container(8.0, 8.0);
    match World::init(sim, &parse_seed("2-2-2").unwrap(), &free(&[(MachineType::T2, 500)]), 1) {
        Err(InitError::ContainerTooSmall { placed, wanted }) => {
            assert_eq!(wanted, 500);
            assert!(placed < 500);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn lone_machine_without_noise_stays_put() {
    let m = MachineState::new(MachineId(0), MachineType::T3, Pose::new(7.0, 8.0, 1.0));
    let mut w = World::from_machines(still(), vec![m], 1).unwrap();
    assert!(w.step().unwrap().is_empty());
    assert_eq!(w.step_number(), 1);
    assert_eq!(w.machines()[0], m);
}

#[test]
fn matching_up_arms_bond_on_contact() {
    let body = MachineBody::default();
    let mut ms = straight_strand(0, &[MachineType::T2; 3], Vec2::new(8.0, 10.0), 0.0, &body);
    // a free type-2 machine upside down over the middle machine, up tips 0.1 apart
    let gap = 0.1;
    let up = body.arm_length(ArmKind::Up);
    ms.push(MachineState::new(MachineId(3), MachineType::T2, Pose::new(10.0, 10.0 + 2.0 * up + gap, std::f64::consts::PI)));
    let tips = arm_tip(&ms[1].pose, &body, ArmKind::Up).distance(arm_tip(&ms[3].pose, &body, ArmKind::Up));
    assert!((tips - gap).abs() < 1e-12);
    let mut w = World::from_machines(still(), ms, 1).unwrap();
    let events = w.step().unwrap();
    let formed: Vec<_> = events.iter().filter(|e| e.kind == EventKind::BondFormed).collect();
    assert_eq!(formed.len(), 1);
    assert_eq!(formed[0].subjects, vec![MachineId(1), MachineId(3)]);
    assert_eq!(formed[0].step, 1);
    assert_eq!(w.machines()[3].bonds.up, Some(MachineId(1)));
}

#[test]
fn unlike_types_ignore_each_other() {
    let body = MachineBody::default();
    let mut ms = straight_strand(0, &[MachineType::T2; 3], Vec2::new(8.0, 10.0), 0.0, &body);
    ms.push(MachineState::new(MachineId(3), MachineType::T4, Pose::new(10.0, 11.3, std::f64::consts::PI)));
    let mut w = World::from_machines(still(), ms, 1).unwrap();
    assert!(w.step().unwrap().iter().all(|e| e.kind != EventKind::BondFormed));
}

#[test]
fn two_claims_on_one_arm_go_to_the_lower_id() {
    let body = MachineBody::default();
    let mut ms = straight_strand(0, &[MachineType::T2; 3], Vec2::new(8.0, 10.0), 0.0, &body);
    let pi = std::f64::consts::PI;
    // both free machines have their up tips on the strand's middle up tip
    ms.push(MachineState::new(MachineId(3), MachineType::T2, Pose::new(10.05, 11.2, pi)));
    ms.push(MachineState::new(MachineId(4), MachineType::T2, Pose::new(9.95, 11.2, pi)));
    let mut w = World::from_machines(still(), ms, 1).unwrap();
    w.step().unwrap();
    assert_eq!(w.machines()[1].bonds.up, Some(MachineId(3)));
    assert_eq!(w.machines()[4].bonds.up, None);
}

fn request(from: u32, to: u32) -> BondRequest {
    BondRequest { from: MachineId(from), arm: ArmKind::Up, to: MachineId(to), to_arm: ArmKind::Up, kind: LinkKind::GeneUp }
}

proptest! {
    #[test]
    fn arbitration_ignores_request_order(pairs in proptest::collection::vec((0u32..6, 0u32..6), 0..20), seed in any::<u64>()) {
        let snap: Vec<MachineState> = (0..6).map(|i| MachineState::new(MachineId(i), MachineType::T2, Pose::new(1.0, 1.0, 0.0))).collect();
        let mut reqs: Vec<BondRequest> = pairs.iter().filter(|(a, b)| a != b).flat_map(|&(a, b)| [request(a, b), request(b, a)]).collect();
        let first = arbitrate(&reqs, &snap);
        // deterministic shuffle
        let mut s = seed | 1;
        for i in (1..reqs.len()).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            reqs.swap(i, (s % (i as u64 + 1)) as usize);
        }
        prop_assert_eq!(&first, &arbitrate(&reqs, &snap));
        let mut used = std::collections::BTreeSet::new();
        for r in &first {
            prop_assert!(used.insert(r.from) && used.insert(r.to));
        }
    }
}

#[test]
fn same_seed_same_events() {
    let run = || {
        let mut w = World::init(SimParams::default().with_container(20.0, 20.0), &parse_seed("2-2-2").unwrap(), &free(&[(MachineType::T2, 12)]), 4).unwrap();
        (w.run_collect(5000).unwrap(), checkpoint(&w))
    };
    assert_eq!(run(), run());
}

#[test]
fn restored_world_continues_identically() {
    let mut a = World::init(SimParams::default().with_container(20.0, 20.0), &parse_seed("2-2-2").unwrap(), &free(&[(MachineType::T2, 12)]), 6).unwrap();
    a.run_collect(1200).unwrap();
    let mut b = restore(&checkpoint(&a)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.run_collect(3000).unwrap(), b.run_collect(3000).unwrap());
    assert_eq!(a, b);
}

#[test]
fn broken_strand_shatters_to_free_machines() {
    let mut w = World::init(still(), &parse_seed("2-2-2-2-2").unwrap(), &FreeCounts::new(), 1).unwrap();
    w.sever_bond(MachineId(2), ArmKind::Right);
    let events = w.run_collect(6).unwrap();
    let shattered: std::collections::BTreeSet<_> =
        events.iter().filter(|e| e.kind == EventKind::Shatter).flat_map(|e| e.subjects.clone()).collect();
    assert_eq!(shattered.len(), 5);
    assert!(w.machines().iter().all(MachineState::is_free));
    let strands = derive_strands(w.machines()).unwrap();
    assert!(strands.iter().all(|s| s.class == StrandClass::Free));
}

#[test]
fn strand_walk_and_loop_canonical_start() {
    let body = MachineBody::default();
    let ms = straight_strand(0, &[MachineType::T2; 4], Vec2::new(5.0, 5.0), 0.0, &body);
    assert_eq!(strand_of(&ms, MachineId(2)), (0..4).map(MachineId).collect::<Vec<_>>());
    let ring = folded_loop(0, &parse_seed("4-4-4-4-4-4").unwrap(), Vec2::new(10.0, 10.0), &body).unwrap();
    assert_eq!(strand_of(&ring, MachineId(4))[0], MachineId(0));
    assert_eq!(strand_of(&ring, MachineId(4)).len(), 6);
}

#[test]
fn resting_folded_loop_is_quiet() {
    let ring = folded_loop(0, &parse_seed("2-3-2-3-2-3-2-3").unwrap(), Vec2::new(10.0, 10.0), &MachineBody::default()).unwrap();
    let before = ring.clone();
    let mut w = World::from_machines(still(), ring, 1).unwrap();
    let events = w.run_collect(1000).unwrap();
    assert!(events.is_empty(), "{events:?}");
    for (a, b) in before.iter().zip(w.machines()) {
        assert!(a.pose.middle().distance(b.pose.middle()) < 1e-6);
    }
}

#[test]
fn hand_built_worlds_are_checked() {
    let mut a = MachineState::new(MachineId(0), MachineType::T2, Pose::new(1.0, 1.0, 0.0));
    a.bonds.right = Some(MachineId(1));
    let b = MachineState::new(MachineId(1), MachineType::T2, Pose::new(3.0, 1.0, 0.0));
    assert!(matches!(World::from_machines(still(), vec![a, b], 1), Err(InitError::Invalid(_))));
}
