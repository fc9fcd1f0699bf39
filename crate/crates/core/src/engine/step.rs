//! One step of the world.
//!
//! 1. freeze a snapshot of every machine;
//! 2. index the snapshot's middles;
//! 3. physics: bond, attraction and repellor forces plus Brownian kicks,
//!    all read from the snapshot;
//! 4. automaton: every machine steps against the snapshot;
//! 5. arbitration of bond requests;
//! 6. commit of internal states, bond drops, new bonds and motion;
//! 7. events, sorted.
//!
//! Nothing written in phase 6 is read before the next step.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::events::{sort_events, Event, EventKind};
use crate::geometry::{ArmKind, BondKind, Kinematics, Vec2};
use crate::physics::{
    bond_forces, brownian_kick, integrate, repellor_force, tip_spring, AnyIndex, ForceAccumulator, PairForce,
    SpatialIndex,
};
use crate::rulebook::{
    candidate_links, derive, desired_relative_angle, link_separation, partner_arm, step_automaton, Action,
    DerivedState, DropReason, IntegrityError, LinkKind, MachineId, MachineState, Neighbourhood,
};

use super::world::{World, WorldError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("step {step}: {source}")]
    Integrity { step: u64, source: IntegrityError },
    #[error("step {step}: invariant violated: {source}\n{dump}")]
    Invariant { step: u64, source: WorldError, dump: String },
}

/// One side's claim on a bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BondRequest {
    pub from: MachineId,
    pub arm: ArmKind,
    pub to: MachineId,
    pub to_arm: ArmKind,
    pub kind: LinkKind,
}

impl BondRequest {
    fn canonical(self) -> BondRequest {
        if self.from <= self.to {
            self
        } else {
            BondRequest { from: self.to, arm: self.to_arm, to: self.from, to_arm: self.arm, kind: self.kind }
        }
    }
}

/// Picks the bonds to form from all requests of a step.
///
/// A bond is accepted when both sides asked for it, both slots are empty in
/// the snapshot, and no smaller conflicting bond (by lower id, its arm, upper
/// id, its arm) claimed either slot first. The result does not depend on the
/// order of `requests`.
pub fn arbitrate(requests: &[BondRequest], snapshot: &[MachineState]) -> Vec<BondRequest> {
    let asked: BTreeSet<BondRequest> = requests.iter().copied().collect();
    let mut reciprocal: Vec<BondRequest> = asked
        .iter()
        .filter(|r| asked.contains(&BondRequest { from: r.to, arm: r.to_arm, to: r.from, to_arm: r.arm, kind: r.kind }))
        .map(|r| r.canonical())
        .collect();
    reciprocal.sort();
    reciprocal.dedup();

    let empty = |id: MachineId, arm: ArmKind| snapshot.get(id.index()).is_some_and(|m| m.bonds.slot(arm).is_none());
    let mut taken: BTreeSet<(MachineId, ArmKind)> = BTreeSet::new();
    let mut pairs: BTreeSet<(MachineId, MachineId)> = BTreeSet::new();
    let mut accepted = Vec::new();
    for r in reciprocal {
        let free = empty(r.from, r.arm) && empty(r.to, r.to_arm);
        let unclaimed = !taken.contains(&(r.from, r.arm)) && !taken.contains(&(r.to, r.to_arm));
        if free && unclaimed && !pairs.contains(&(r.from, r.to)) {
            taken.insert((r.from, r.arm));
            taken.insert((r.to, r.to_arm));
            pairs.insert((r.from, r.to));
            accepted.push(r);
        }
    }
    accepted
}

fn bond_kind_name(arm: ArmKind, other: ArmKind) -> &'static str {
    match (arm, other) {
        (ArmKind::Up, _) => "up",
        (ArmKind::OverlapDetector, _) => "overlap",
        _ => "sideways",
    }
}

fn link_name(kind: LinkKind) -> &'static str {
    match kind {
        LinkKind::GeneUp => "gene-up",
        LinkKind::PheneUp => "phene-up",
        LinkKind::ChildSideways => "child-sideways",
        LinkKind::Closure => "closure",
        LinkKind::Overlap => "overlap",
    }
}

/// Machines of the sideways chain through `id`, left to right. Loops start
/// at their smallest id.
pub fn strand_of(machines: &[MachineState], id: MachineId) -> Vec<MachineId> {
    let mut start = id;
    let mut looped = false;
    while let Some(l) = machines[start.index()].bonds.left {
        if l == id {
            looped = true;
            break;
        }
        start = l;
    }
    if looped {
        let mut ids = vec![id];
        let mut cur = id;
        while let Some(r) = machines[cur.index()].bonds.right {
            if r == id {
                break;
            }
            ids.push(r);
            cur = r;
        }
        let k = ids.iter().enumerate().min_by_key(|(_, &v)| v).map_or(0, |(i, _)| i);
        ids.rotate_left(k);
        return ids;
    }
    let mut ids = vec![start];
    let mut cur = start;
    while let Some(r) = machines[cur.index()].bonds.right {
        ids.push(r);
        cur = r;
    }
    ids
}

fn type_string(machines: &[MachineState], ids: &[MachineId]) -> String {
    ids.iter().map(|id| machines[id.index()].machine_type().to_string()).collect::<Vec<_>>().join("-")
}

fn id_string(ids: &[MachineId]) -> String {
    ids.iter().map(|id| id.0.to_string()).collect::<Vec<_>>().join(",")
}

/// Neighbour lists in one flat buffer.
struct NearLists {
    starts: Vec<usize>,
    ids: Vec<MachineId>,
}

impl NearLists {
    fn of(&self, i: usize) -> &[MachineId] {
        &self.ids[self.starts[i]..self.starts[i + 1]]
    }
}

fn apply(acc: &mut [ForceAccumulator], a: usize, b: usize, f: PairForce) {
    acc[a].add(f.force_a, f.torque_a);
    acc[b].add(f.force_b, f.torque_b);
}

impl World {
    pub fn step(&mut self) -> Result<Vec<Event>, StepError> {
        self.advance(None)
    }

    /// Step with the automaton evaluated in the given machine order. The
    /// outcome must not depend on it; this exists to test that.
    pub fn step_with_order(&mut self, order: &[MachineId]) -> Result<Vec<Event>, StepError> {
        self.advance(Some(order))
    }

    fn advance(&mut self, order: Option<&[MachineId]>) -> Result<Vec<Event>, StepError> {
        let sim = self.sim;
        let phys = &sim.physics;
        let body = &sim.body;
        let now = self.step + 1;
        let integrity = |source| StepError::Integrity { step: now, source };

        // (1) snapshot
        let snap: Vec<MachineState> = self.machines.clone();
        let n = snap.len();

        // (2) index
        let points: Vec<Vec2> = snap.iter().map(|m| m.pose.middle()).collect();
        let range = phys.interaction_range(body);
        let index = AnyIndex::build(self.index_mode, &points, phys.container_width, phys.container_height, range);
        let mut near = NearLists { starts: Vec::with_capacity(n + 1), ids: Vec::new() };
        for p in &points {
            near.starts.push(near.ids.len());
            index.within(*p, range, &mut near.ids);
        }
        near.starts.push(near.ids.len());

        let derived: Vec<DerivedState> = snap.iter().map(|m| derive(m, &snap, &sim)).collect::<Result<_, _>>().map_err(integrity)?;

        // (3) physics
        let mut acc = vec![ForceAccumulator::default(); n];
        for (i, a) in snap.iter().enumerate() {
            if let Some(r) = a.bonds.right {
                let b = &snap[r.index()];
                let desired = desired_relative_angle(a, b, BondKind::Sideways);
                apply(&mut acc, i, r.index(), bond_forces(&a.pose, &b.pose, body, BondKind::Sideways, desired, phys));
            }
            if let Some(u) = a.bonds.up.filter(|&u| a.id() < u) {
                let b = &snap[u.index()];
                apply(&mut acc, i, u.index(), bond_forces(&a.pose, &b.pose, body, BondKind::Up, 0.0, phys));
            }
            let a_up = a.bonds.up.map(|u| &snap[u.index()]);
            for &j in near.of(i).iter().filter(|&&j| j > a.id()) {
                let b = &snap[j.index()];
                for link in candidate_links(a, &derived[i], a_up, b, &derived[j.index()], &sim) {
                    if link.kind != LinkKind::Overlap && link_separation(a, b, &link, body) <= 2.0 * phys.field_radius {
                        apply(&mut acc, i, j.index(), tip_spring(&a.pose, link.arm, &b.pose, link.other_arm, body, phys.spring_k));
                    }
                }
                if a.internal.repel_counter > 0 && b.internal.repel_counter > 0 {
                    apply(&mut acc, i, j.index(), repellor_force(&a.pose, &b.pose, body, phys));
                }
            }
        }
        let kicks: Vec<(f64, f64, f64)> = (0..n).map(|_| brownian_kick(&mut self.rng, phys)).collect();

        // (4) automaton
        let default_order: Vec<MachineId>;
        let order = match order {
            Some(o) => o,
            None => {
                default_order = (0..n as u32).map(MachineId).collect();
                &default_order
            }
        };
        let mut outputs = vec![None; n];
        for &id in order {
            let i = id.index();
            let me = &snap[i];
            let mut hood = Neighbourhood::new();
            for &j in near.of(i) {
                hood.push(&snap[j.index()], derived[j.index()]);
            }
            for (_, j) in me.bonds.iter() {
                if let Some(m) = snap.get(j.index()) {
                    hood.push(m, derived[j.index()]);
                }
            }
            outputs[i] = Some(step_automaton(me, &derived[i], &hood, &sim, now).map_err(integrity)?);
        }

        // (5) arbitration
        let mut events = Vec::new();
        let mut requests = Vec::new();
        let mut drops = Vec::new();
        for (i, out) in outputs.iter().enumerate() {
            let out = out.as_ref().expect("every machine is evaluated once");
            for action in &out.actions {
                match action {
                    Action::RequestBond { arm, target, target_arm, kind } => requests.push(BondRequest {
                        from: MachineId(i as u32),
                        arm: *arm,
                        to: *target,
                        to_arm: *target_arm,
                        kind: *kind,
                    }),
                    Action::DropBond { arm, reason } => drops.push((MachineId(i as u32), *arm, *reason)),
                    Action::Emit(e) => events.push(e.clone()),
                }
            }
        }
        let accepted = arbitrate(&requests, &snap);

        // (6) commit
        for (m, out) in self.machines.iter_mut().zip(&outputs) {
            m.internal = out.as_ref().expect("evaluated").internal;
        }
        let mut broken = BTreeSet::new();
        let mut split_side = BTreeSet::new();
        for &(id, arm, reason) in &drops {
            let Some(other) = snap[id.index()].bonds.slot(arm) else { continue };
            if reason == DropReason::Split {
                split_side.insert((id, other));
            }
            let key = if id < other { (id, arm, other) } else { (other, partner_arm(arm), id) };
            if !broken.insert(key) {
                continue;
            }
            if let Some(slot) = self.machines[id.index()].bonds.slot_mut(arm) {
                *slot = None;
            }
            if let Some(slot) = self.machines[other.index()].bonds.slot_mut(partner_arm(arm)) {
                *slot = None;
            }
            events.push(
                Event::new(now, EventKind::BondBroken, vec![key.0, key.2])
                    .with("bond", bond_kind_name(key.1, partner_arm(key.1)))
                    .with("reason", reason.name()),
            );
        }
        for r in &accepted {
            *self.machines[r.from.index()].bonds.slot_mut(r.arm).expect("bondable arm") = Some(r.to);
            *self.machines[r.to.index()].bonds.slot_mut(r.to_arm).expect("bondable arm") = Some(r.from);
            if r.kind == LinkKind::GeneUp {
                for (x, y) in [(r.from, r.to), (r.to, r.from)] {
                    if snap[x.index()].is_free() && snap[y.index()].bonds.is_strand_member() {
                        self.machines[x.index()].internal.copying = true;
                    }
                }
            }
            events.push(
                Event::new(now, EventKind::BondFormed, vec![r.from, r.to])
                    .with("bond", bond_kind_name(r.arm, r.to_arm))
                    .with("rule", link_name(r.kind)),
            );
        }
        for (i, m) in self.machines.iter_mut().enumerate() {
            let (dvx, dvy, dw) = kicks[i];
            let s = &snap[i];
            let kin = Kinematics { vx: s.kin.vx + dvx, vy: s.kin.vy + dvy, omega: s.kin.omega + dw };
            let (pose, kin) = integrate(&s.pose, &kin, &acc[i], phys);
            m.pose = pose;
            m.kin = kin;
        }

        // (7) events
        let mut seen = BTreeSet::new();
        for &(id, partner) in &split_side {
            if snap[id.index()].internal.copying {
                continue;
            }
            let parent = strand_of(&self.machines, id);
            let child = strand_of(&self.machines, partner);
            let attached = |ids: &[MachineId]| ids.iter().any(|x| self.machines[x.index()].bonds.up.is_some());
            if attached(&parent) || attached(&child) || !seen.insert(parent[0]) {
                continue;
            }
            let subjects = parent.iter().chain(&child).copied().collect();
            events.push(
                Event::new(now, EventKind::Split, subjects)
                    .with("parent", type_string(&self.machines, &parent))
                    .with("child", type_string(&self.machines, &child))
                    .with("parent_ids", id_string(&parent))
                    .with("child_ids", id_string(&child)),
            );
        }
        sort_events(&mut events);
        // several machines of one phene can start the same unfold
        let mut unfolding = BTreeSet::new();
        events.retain(|e| e.kind != EventKind::UnfoldStart || unfolding.insert(strand_of(&snap, e.subjects[0])[0]));
        self.step = now;

        if let Err(source) = self.check_invariants() {
            return Err(StepError::Invariant { step: now, dump: self.dump_around(&source), source });
        }
        Ok(events)
    }

    fn dump_around(&self, err: &WorldError) -> String {
        let ids: Vec<MachineId> = match *err {
            WorldError::SelfBond(a) | WorldError::FoldedSeedGene(a) | WorldError::NonFinite(a) | WorldError::OutOfBounds(a) => vec![a],
            WorldError::Asymmetric { a, b, .. } | WorldError::Dangling { a, b, .. } => vec![a, b],
            WorldError::IdMismatch { index, .. } => vec![MachineId(index as u32)],
        };
        ids.iter()
            .filter_map(|id| self.machine(*id))
            .map(|m| format!("{m:?}"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Step up to `max_steps` times. The observer sees the world and the
    /// step's events after every step and may stop the run early.
    pub fn run<O: Observer + ?Sized>(&mut self, max_steps: u64, observer: &mut O) -> Result<RunStats, StepError> {
        let mut stats = RunStats::default();
        for _ in 0..max_steps {
            let events = self.step()?;
            stats.steps += 1;
            stats.events += events.len() as u64;
            if observer.observe(self, &events).is_break() {
                stats.stopped_early = true;
                break;
            }
        }
        Ok(stats)
    }

    /// Run and keep every event.
    pub fn run_collect(&mut self, max_steps: u64) -> Result<Vec<Event>, StepError> {
        let mut log = Vec::new();
        self.run(max_steps, &mut |_: &World, events: &[Event]| {
            log.extend_from_slice(events);
            ControlFlow::Continue(())
        })?;
        Ok(log)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunStats {
    pub steps: u64,
    pub events: u64,
    pub stopped_early: bool,
}

/// Read-only per-step hook.
pub trait Observer {
    fn observe(&mut self, world: &World, events: &[Event]) -> ControlFlow<()>;
}

impl<F: FnMut(&World, &[Event]) -> ControlFlow<()>> Observer for F {
    fn observe(&mut self, world: &World, events: &[Event]) -> ControlFlow<()> {
        self(world, events)
    }
}
