//! Acceptance criteria A1 to A10, one line each.
//!
//! cargo test --test acceptance            report only
//! cargo test --test acceptance -- --strict  exit non-zero on any FAIL

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use foldmesh::engine::scenario::folded_loop;
use foldmesh::engine::{checkpoint, restore, FreeCounts, World};
use foldmesh::events::{Event, EventKind};
use foldmesh::geometry::{
    arm_tip, normalize_angle, relative_bond_angle, ArmKind, BondKind, Kinematics, MachineBody, MachineType, Pose, Vec2,
};
use foldmesh::io::{derive_strands, summarize, write_trace, StrandClass};
use foldmesh::params::SimParams;
use foldmesh::physics::{
    bond_forces, integrate, repellor_force, tip_spring, twist, BruteForceIndex, ForceAccumulator, GridIndex, IndexMode,
    PhysicsParams, SpatialIndex, Xorshift64Star,
};
use foldmesh::rulebook::{
    bend_location, bend_location_bond_allowed, fold_angle, gene_up_bond_allowed, partner_arm, phene_up_bond_allowed,
    BendLocation, FoldAngle, MachineId, MachineState,
};
use foldmesh::seedlab::{parse_seed, predict_fold, validate_seed};
use rand::{Rng, RngCore, SeedableRng};
use rand::rngs::StdRng;
use rayon::prelude::*;

const A3_BUDGET: u64 = 100_000;
const A4_BUDGET: u64 = 400_000;
const A10_RATIO: f64 = 0.25;
const SAMPLE_EVERY: u64 = 1_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Conservation and bond symmetry seen from outside the engine.
#[derive(Default)]
struct Audit {
    samples: u64,
    failures: Vec<String>,
}

impl Audit {
    fn check(&mut self, label: &str, w: &World, expected: usize) {
        self.samples += 1;
        let ms = w.machines();
        if ms.len() != expected {
            self.failures.push(format!("{label} step {}: {} machines, expected {expected}", w.step_number(), ms.len()));
        }
        for m in ms {
            for (arm, other) in m.bonds.iter() {
                let back = ms.get(other.index()).and_then(|o| o.bonds.slot(partner_arm(arm)));
                if back != Some(m.id()) {
                    self.failures.push(format!("{label} step {}: {:?} {arm:?} -> {:?} is one-sided", w.step_number(), m.id(), other));
                }
            }
        }
    }

    fn merge(&mut self, other: Audit) {
        self.samples += other.samples;
        self.failures.extend(other.failures);
    }
}

fn free(pairs: &[(MachineType, u32)]) -> FreeCounts {
    pairs.iter().copied().collect()
}

fn quiet(w: f64, h: f64) -> SimParams {
    let mut sim = SimParams::default().with_container(w, h);
    sim.physics = sim.physics.drag_only();
    sim
}

// ---------------------------------------------------------------- A1

const GENE_UP: [[u8; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
const PHENE_UP: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 1]];
// degrees; -1 undefined
const FOLD: [[i32; 4]; 4] = [[0, 0, 0, 0], [0, 120, 45, 90], [0, 45, -1, -1], [0, 90, -1, 60]];
const BEND_UP: [[u8; 4]; 4] = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]];

fn a1() -> Outcome {
    let t = MachineType::ALL;
    let mut bad = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let (a, b) = (t[i], t[j]);
            if gene_up_bond_allowed(a, b) != (GENE_UP[i][j] == 1) {
                bad.push(format!("gene-up {a}-{b}"));
            }
            if phene_up_bond_allowed(a, b) != (PHENE_UP[i][j] == 1) {
                bad.push(format!("phene-up {a}-{b}"));
            }
            let want = if FOLD[i][j] < 0 { FoldAngle::Undefined } else { FoldAngle::Degrees(FOLD[i][j] as u16) };
            if fold_angle(a, b) != want {
                bad.push(format!("fold {a}-{b}"));
            }
        }
    }
    let mut pairs = 0;
    for (i, &a) in BendLocation::ALL.iter().enumerate() {
        for (j, &b) in BendLocation::ALL.iter().enumerate() {
            pairs += 1;
            if bend_location_bond_allowed(a, b) != (BEND_UP[i][j] == 1) {
                bad.push(format!("bend-location {a:?}-{b:?}"));
            }
        }
    }
    // absent, straight and bending neighbours on each side; absent reads as bending
    use BendLocation::*;
    let kinds = [(None, true), (Some(MachineType::T1), false), (Some(MachineType::T3), true)];
    let mut combos = 0;
    for (l, l_bends) in kinds {
        for (r, r_bends) in kinds {
            combos += 1;
            let want = [[Extender, LeftOfBend], [RightOfBend, InBend]][usize::from(l_bends)][usize::from(r_bends)];
            if bend_location(l, r) != want {
                bad.push(format!("bend location {l:?}/{r:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("48 table cells, {pairs} bend pairs, {combos} neighbour combos; mismatches {bad:?}"))
}

// ---------------------------------------------------------------- A2

fn a2() -> Outcome {
    let cases = [
        ("2-2-2", 3),
        ("4-2-4-2", 4),
        ("4-4-4-4-4-4", 6),
        ("2-3-2-3-2-3-2-3", 8),
        ("2-4-2-1-2-4-2-1", 4),
        ("2-1-2-2-1-2-2-1-2", 3),
    ];
    let mut bad = Vec::new();
    for (s, corners) in cases {
        match predict_fold(&parse_seed(s).unwrap()) {
            Ok(p) if p.closed && p.total_turn == 360 && p.corners() == corners && p.closure_distance <= 1e-9 => {}
            other => bad.push(format!("{s}: {other:?}")),
        }
    }
    for s in ["2-2-2-2", "3-3-3"] {
        if validate_seed(&parse_seed(s).unwrap()).is_valid() {
            bad.push(format!("{s} accepted"));
        }
    }
    outcome(bad.is_empty(), format!("6 closures, 2 rejections; failures {bad:?}"))
}

// ---------------------------------------------------------------- A3

fn a3(audit: &mut Audit) -> Outcome {
    let mut splits = 0;
    let mut bad = Vec::new();
    let mut firsts = Vec::new();
    for rng in 1..=10 {
        let sim = SimParams::default().with_container(20.0, 20.0);
        let mut w = World::init(sim, &parse_seed("2-2-2").unwrap(), &free(&[(MachineType::T2, 12)]), rng).unwrap();
        let n = w.len();
        let mut first = None;
        while w.step_number() < A3_BUDGET && first.is_none() {
            for e in w.step().unwrap() {
                if e.kind != EventKind::Split {
                    continue;
                }
                let reversed: Vec<&str> = e.detail["parent"].split('-').rev().collect();
                if e.detail["child"] != reversed.join("-") {
                    bad.push(format!("rng {rng} step {}: {} / {}", e.step, e.detail["parent"], e.detail["child"]));
                }
                first.get_or_insert(e.step);
            }
            if w.step_number().is_multiple_of(SAMPLE_EVERY) {
                audit.check("A3", &w, n);
            }
        }
        if let Some(s) = first {
            splits += 1;
            firsts.push(s);
        }
    }
    outcome(splits >= 8 && bad.is_empty(), format!("{splits}/10 seeds split (first at {firsts:?}); bad children {bad:?}"))
}

// ---------------------------------------------------------------- A4

struct MeshRun {
    rng: u64,
    triangles: usize,
    largest: usize,
    seed_phenes: usize,
    trace: Vec<u8>,
    audit: Audit,
}

fn a4_world(rng: u64) -> World {
    World::init(SimParams::default(), &parse_seed("2-2-2").unwrap(), &free(&[(MachineType::T2, 54)]), rng).unwrap()
}

fn folded_triangles(w: &World) -> usize {
    derive_strands(w.machines())
        .unwrap()
        .iter()
        .filter(|s| {
            s.class == StrandClass::Phene && s.closed && s.ids.len() == 3 && s.ids.iter().all(|id| w.machines()[id.index()].internal.folded)
        })
        .count()
}

fn mesh_run(rng: u64) -> MeshRun {
    let mut w = a4_world(rng);
    let n = w.len();
    let mut audit = Audit::default();
    let mut events = Vec::new();
    while w.step_number() < A4_BUDGET {
        events.extend(w.run_collect(SAMPLE_EVERY).unwrap());
        audit.check("A4", &w, n);
    }
    let s = summarize(w.step_number(), w.machines(), &events).unwrap();
    let mut trace = Vec::new();
    write_trace(&mut trace, &events).unwrap();
    MeshRun {
        rng,
        triangles: folded_triangles(&w),
        largest: s.largest_mesh_size,
        seed_phenes: events.iter().filter(|e| e.kind == EventKind::SeedPheneCreated).count(),
        trace,
        audit,
    }
}

fn a4(runs: &[MeshRun]) -> Outcome {
    let good = runs.iter().filter(|r| r.triangles >= 5 && r.largest >= 3).count();
    let one_seed_phene = runs.iter().all(|r| r.seed_phenes == 1);
    let table: Vec<String> = runs.iter().map(|r| format!("{}:{}/{}/{}", r.rng, r.triangles, r.largest, r.seed_phenes)).collect();
    outcome(
        good >= 7 && one_seed_phene,
        format!("{good}/10 seeds reach 5 triangles and a 3-mesh; rng:triangles/largest/seed-phenes {}", table.join(" ")),
    )
}

// ---------------------------------------------------------------- A5

fn triangle(first: u32, c: Vec2) -> Vec<MachineState> {
    folded_loop(first, &parse_seed("2-2-2").unwrap(), c, &MachineBody::default()).unwrap()
}

fn count(events: &[Event], kind: EventKind) -> usize {
    events.iter().filter(|e| e.kind == kind).count()
}

fn a5() -> Outcome {
    // (i) overlap
    let mut ms = triangle(0, Vec2::new(15.0, 15.0));
    ms.extend(triangle(3, Vec2::new(15.1, 15.0)));
    for m in &mut ms {
        m.internal.in_mesh = true;
    }
    let mut w = World::from_machines(quiet(30.0, 30.0), ms, 1).unwrap();
    let overlap = count(&w.run_collect(1000).unwrap(), EventKind::UnfoldStart);

    // (ii) stress
    let ms = triangle(0, Vec2::new(15.0, 15.0));
    let mut twisted = ms[0].pose;
    twisted.heading += 0.6;
    let anchor = ms[1].pose;
    let mut w = World::from_machines(quiet(30.0, 30.0), ms, 1).unwrap();
    let limit = u64::from(w.params().rules.stress_limit);
    let mut stress_events = Vec::new();
    for _ in 0..limit + 2 {
        w.set_pose(MachineId(0), twisted);
        w.set_pose(MachineId(1), anchor);
        stress_events.extend(w.step().unwrap());
    }
    let stress: Vec<u64> = stress_events
        .iter()
        .filter(|e| e.kind == EventKind::UnfoldStart && e.detail.get("cause").is_some_and(|c| c == "stress"))
        .map(|e| e.step)
        .collect();
    let unfolded = w.machines().iter().all(|m| !m.internal.folded);

    // (iii) shatter
    let len = 5;
    let mut w = World::init(quiet(30.0, 30.0), &parse_seed("2-2-2-2-2").unwrap(), &FreeCounts::new(), 1).unwrap();
    for i in 0..len {
        w.edit(MachineId(i), |m| m.internal.seed_gene = false);
    }
    w.sever_bond(MachineId(2), ArmKind::Left);
    let shatter_events = w.run_collect(u64::from(len)).unwrap();
    let residual: usize = w.machines().iter().map(|m| m.bonds.iter().count()).sum();

    let pass = overlap == 1 && stress.len() == 1 && stress[0] <= limit + 2 && unfolded && residual == 0;
    outcome(
        pass,
        format!(
            "overlap unfolds {overlap}; stress unfold at {stress:?} (limit {limit}), phene unfolded {unfolded}; \
             {} shatter events, {residual} residual bonds after {len} steps",
            count(&shatter_events, EventKind::Shatter)
        ),
    )
}

// ---------------------------------------------------------------- A6

fn a6() -> Outcome {
    let sim = quiet(20.0, 20.0);
    let fold_limit = u64::from(sim.rules.fold_limit);
    let mut w = World::init(sim, &parse_seed("2-2-2").unwrap(), &FreeCounts::new(), 1).unwrap();
    let events = w.run_collect(3 * fold_limit).unwrap();
    let seed_stays = count(&events, EventKind::FoldStart) == 0 && w.machines().iter().all(|m| !m.internal.folded);

    let mut w = World::init(sim, &parse_seed("2-2-2").unwrap(), &FreeCounts::new(), 1).unwrap();
    for i in 0..3 {
        w.edit(MachineId(i), |m| {
            m.internal.seed_gene = false;
            m.internal.seed_phene = false;
        });
    }
    let mut folded_at = None;
    while w.step_number() < fold_limit + 3 && folded_at.is_none() {
        w.step().unwrap();
        if w.machines().iter().all(|m| m.internal.folded) {
            folded_at = Some(w.step_number());
        }
    }
    outcome(
        seed_stays && folded_at.is_some(),
        format!("seed unfolded after {} steps: {seed_stays}; plain strand folded at {folded_at:?} (limit {})", 3 * fold_limit, fold_limit + 3),
    )
}

// ---------------------------------------------------------------- A7

fn grad(u: impl Fn(&Pose) -> f64, a: &Pose) -> [f64; 3] {
    let h = 1e-5;
    let d = |dx: f64, dy: f64, dt: f64| Pose { x: a.x + dx, y: a.y + dy, heading: a.heading + dt };
    [
        -(u(&d(h, 0.0, 0.0)) - u(&d(-h, 0.0, 0.0))) / (2.0 * h),
        -(u(&d(0.0, h, 0.0)) - u(&d(0.0, -h, 0.0))) / (2.0 * h),
        -(u(&d(0.0, 0.0, h)) - u(&d(0.0, 0.0, -h))) / (2.0 * h),
    ]
}

fn rel_err(analytic: [f64; 3], numeric: [f64; 3]) -> f64 {
    let scale = analytic.iter().chain(&numeric).fold(1e-3_f64, |m, v| m.max(v.abs()));
    analytic.iter().zip(&numeric).map(|(a, n)| (a - n).abs() / scale).fold(0.0, f64::max)
}

fn a7() -> Outcome {
    let body = MachineBody::default();
    let params = PhysicsParams::default();
    let arms = [ArmKind::Left, ArmKind::Right, ArmKind::Up, ArmKind::Repellor, ArmKind::OverlapDetector];
    let mut rng = StdRng::seed_from_u64(70);
    let pose = |rng: &mut StdRng| Pose { x: rng.gen_range(0.0..4.0), y: rng.gen_range(0.0..4.0), heading: rng.gen_range(-3.0..3.0) };
    let (mut spring_err, mut twist_err, mut pair_sum) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let (a, b) = (pose(&mut rng), pose(&mut rng));
        let (aa, ab) = (arms[rng.gen_range(0..5)], arms[rng.gen_range(0..5)]);
        let k = rng.gen_range(0.5..8.0);
        let energy = |p: &Pose, q: &Pose| 0.5 * k * arm_tip(p, &body, aa).distance(arm_tip(q, &body, ab)).powi(2);
        let f = tip_spring(&a, aa, &b, ab, &body, k);
        spring_err = spring_err.max(rel_err([f.force_a.x, f.force_a.y, f.torque_a], grad(|p| energy(p, &b), &a)));
        spring_err = spring_err.max(rel_err([f.force_b.x, f.force_b.y, f.torque_b], grad(|p| energy(&a, p), &b)));

        pair_sum = pair_sum.max((f.force_a + f.force_b).norm());
        pair_sum = pair_sum.max((bond_forces(&a, &b, &body, BondKind::Sideways, 1.0, &params).force_a
            + bond_forces(&a, &b, &body, BondKind::Sideways, 1.0, &params).force_b)
            .norm());
        let r = repellor_force(&a, &b, &body, &params);
        pair_sum = pair_sum.max((r.force_a + r.force_b).norm());
    }
    let mut checked = 0;
    while checked < 1000 {
        let (a, b) = (pose(&mut rng), pose(&mut rng));
        let kind = if rng.gen_bool(0.5) { BondKind::Sideways } else { BondKind::Up };
        let desired = rng.gen_range(-2.0..2.0);
        let energy = |p: &Pose, q: &Pose| 0.5 * 1.5 * normalize_angle(relative_bond_angle(p, q, kind) - desired).powi(2);
        // skip the kink where the wrapped error jumps
        if normalize_angle(relative_bond_angle(&a, &b, kind) - desired).abs() > 3.0 {
            continue;
        }
        let f = twist(&a, &b, kind, desired, 1.5);
        twist_err = twist_err.max(rel_err([f.force_a.x, f.force_a.y, f.torque_a], grad(|p| energy(p, &b), &a)));
        twist_err = twist_err.max(rel_err([f.force_b.x, f.force_b.y, f.torque_b], grad(|p| energy(&a, p), &b)));
        checked += 1;
    }

    let drag = PhysicsParams::default().drag_only();
    let (mut worst_angle, mut worst_gap) = (0.0_f64, 0.0_f64);
    for desired in [0.0, -120f64.to_radians(), -90f64.to_radians(), -45f64.to_radians()] {
        let mut a = Pose::new(10.0, 10.0, 0.3);
        let mut b = Pose::new(12.3, 9.8, 0.55 + desired);
        let (mut ka, mut kb) = (Kinematics::default(), Kinematics::default());
        for _ in 0..20_000 {
            let f = bond_forces(&a, &b, &body, BondKind::Sideways, desired, &drag);
            let (mut fa, mut fb) = (ForceAccumulator::default(), ForceAccumulator::default());
            fa.add(f.force_a, f.torque_a);
            fb.add(f.force_b, f.torque_b);
            (a, ka) = integrate(&a, &ka, &fa, &drag);
            (b, kb) = integrate(&b, &kb, &fb, &drag);
        }
        worst_angle = worst_angle.max(normalize_angle(relative_bond_angle(&a, &b, BondKind::Sideways) - desired).abs().to_degrees());
        worst_gap = worst_gap.max(arm_tip(&a, &body, ArmKind::Right).distance(arm_tip(&b, &body, ArmKind::Left)));
    }
    outcome(
        spring_err <= 1e-6 && twist_err <= 1e-6 && pair_sum <= 1e-12 && worst_angle < 1.0 && worst_gap < 1e-3,
        format!(
            "spring rel err {spring_err:.1e}, twist rel err {twist_err:.1e}, pair sum {pair_sum:.1e}, \
             settled within {worst_angle:.2e} deg and {worst_gap:.1e} units"
        ),
    )
}

// ---------------------------------------------------------------- A8

fn a8(first: &MeshRun, audit: &mut Audit) -> Outcome {
    let again = mesh_run(first.rng);
    let same_trace = again.trace == first.trace;
    audit.merge(again.audit);

    const TAIL: u64 = 1_000;
    let mut w = a4_world(2);
    let n = w.len();
    let mut forks: BTreeMap<u64, (Vec<Event>, Vec<u8>)> = BTreeMap::new();
    let mut mine: BTreeMap<u64, Vec<Event>> = BTreeMap::new();
    let mut mismatched = Vec::new();
    for k in [1, 1_000, 100_000] {
        while w.step_number() < k {
            let events = w.step().unwrap();
            for (&start, log) in mine.iter_mut() {
                if w.step_number() <= start + TAIL {
                    log.extend(events.iter().cloned());
                }
            }
            if w.step_number().is_multiple_of(SAMPLE_EVERY) {
                audit.check("A8", &w, n);
            }
            settle(&w, &mut forks, &mut mine, &mut mismatched);
        }
        let mut fork = restore(&checkpoint(&w)).unwrap();
        let log = fork.run_collect(TAIL).unwrap();
        forks.insert(k, (log, checkpoint(&fork)));
        mine.insert(k, Vec::new());
    }
    while !mine.is_empty() {
        let events = w.step().unwrap();
        for (&start, log) in mine.iter_mut() {
            if w.step_number() <= start + TAIL {
                log.extend(events.iter().cloned());
            }
        }
        settle(&w, &mut forks, &mut mine, &mut mismatched);
    }
    outcome(
        same_trace && mismatched.is_empty(),
        format!(
            "repeat run trace identical: {same_trace} ({} bytes); restore at k = 1, 1000, 100000 diverged at {mismatched:?}",
            first.trace.len()
        ),
    )
}

fn settle(w: &World, forks: &mut BTreeMap<u64, (Vec<Event>, Vec<u8>)>, mine: &mut BTreeMap<u64, Vec<Event>>, bad: &mut Vec<u64>) {
    let done: Vec<u64> = mine.keys().copied().filter(|&k| w.step_number() == k + 1_000).collect();
    for k in done {
        let log = mine.remove(&k).unwrap();
        let (fork_log, fork_bytes) = forks.remove(&k).unwrap();
        if log != fork_log || checkpoint(w) != fork_bytes {
            bad.push(k);
        }
    }
}

// ---------------------------------------------------------------- A9

fn a9(audit: &mut Audit) -> Outcome {
    let sim = SimParams::default().with_container(20.0, 20.0);
    let soup = free(&[(MachineType::T2, 47)]);
    let mut plain = World::init(sim, &parse_seed("2-2-2").unwrap(), &soup, 9).unwrap();
    let mut shuffled = plain.clone();
    let n = plain.len();
    let mut order: Vec<MachineId> = (0..n as u32).map(MachineId).collect();
    let mut rng = Xorshift64Star::seed_from(99);
    let mut diverged = None;
    let mut events = 0;
    for _ in 0..10_000 {
        for i in (1..order.len()).rev() {
            order.swap(i, (rng.next_u64() % (i as u64 + 1)) as usize);
        }
        let a = plain.step().unwrap();
        let b = shuffled.step_with_order(&order).unwrap();
        events += a.len();
        if a != b || plain.machines() != shuffled.machines() {
            diverged = Some(plain.step_number());
            break;
        }
        if plain.step_number().is_multiple_of(SAMPLE_EVERY) {
            audit.check("A9", &plain, n);
        }
    }
    let identical = diverged.is_none() && checkpoint(&plain) == checkpoint(&shuffled);
    outcome(
        identical && audit.failures.is_empty() && audit.samples > 0,
        format!(
            "{n} machines, 10000 shuffled steps ({events} events) identical: {identical}; \
             {} sampled states across runs, violations {:?}",
            audit.samples,
            audit.failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

// ---------------------------------------------------------------- A10

fn a10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(100);
    let pts: Vec<Vec2> = (0..200).map(|_| Vec2::new(rng.gen_range(0.0..40.0), rng.gen_range(0.0..40.0))).collect();
    let grid = GridIndex::build(&pts, 40.0, 40.0, 2.5);
    let brute = BruteForceIndex::build(&pts);
    let mut differ = 0;
    for _ in 0..1000 {
        let q = Vec2::new(rng.gen_range(-2.0..42.0), rng.gen_range(-2.0..42.0));
        let r = rng.gen_range(0.0..8.0);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        grid.within(q, r, &mut a);
        brute.within(q, r, &mut b);
        differ += usize::from(a != b);
    }

    let timed = |mode: IndexMode| {
        let sim = SimParams::default().with_container(80.0, 80.0);
        let soup = free(&[(MachineType::T2, 250), (MachineType::T4, 247)]);
        let mut w = World::init(sim, &parse_seed("2-2-2").unwrap(), &soup, 5).unwrap();
        w.set_index_mode(mode);
        let t = Instant::now();
        w.run_collect(10_000).unwrap();
        (t.elapsed().as_secs_f64(), checkpoint(&w))
    };
    let (grid_s, _) = timed(IndexMode::Grid);
    let (brute_s, _) = timed(IndexMode::BruteForce);
    let ratio = grid_s / brute_s;
    outcome(
        differ == 0 && ratio <= A10_RATIO,
        format!("{differ}/1000 queries differ; 500 machines x 10000 steps: grid {grid_s:.2} s, brute force {brute_s:.2} s, ratio {ratio:.2} (limit {A10_RATIO})"),
    )
}

fn main() -> ExitCode {
    let mut audit = Audit::default();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let report = |name: &'static str, started: Instant, o: Outcome, results: &mut Vec<(&str, Outcome)>| {
        println!("{name} {} ({:.1} s) {}", if o.pass { "PASS" } else { "FAIL" }, started.elapsed().as_secs_f64(), o.detail);
        results.push((name, o));
    };

    let t = Instant::now();
    report("A1", t, a1(), &mut results);
    let t = Instant::now();
    report("A2", t, a2(), &mut results);
    let t = Instant::now();
    let o = a3(&mut audit);
    report("A3", t, o, &mut results);
    let t = Instant::now();
    let runs: Vec<MeshRun> = (1..=10).into_par_iter().map(mesh_run).collect();
    report("A4", t, a4(&runs), &mut results);
    let t = Instant::now();
    report("A5", t, a5(), &mut results);
    let t = Instant::now();
    report("A6", t, a6(), &mut results);
    let t = Instant::now();
    report("A7", t, a7(), &mut results);
    let t = Instant::now();
    let o = a8(&runs[0], &mut audit);
    report("A8", t, o, &mut results);
    for r in runs {
        audit.merge(r.audit);
    }
    let t = Instant::now();
    let o = a9(&mut audit);
    report("A9", t, o, &mut results);
    let t = Instant::now();
    report("A10", t, a10(), &mut results);

    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    println!("acceptance: {}/{} pass; failing {failed:?}", results.len() - failed.len(), results.len());
    let strict = std::env::args().any(|a| a == "--strict");
    if strict && !failed.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
