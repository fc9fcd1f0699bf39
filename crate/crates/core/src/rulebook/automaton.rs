//! The per-machine automaton.
//!
//! [`step_automaton`] maps one machine's snapshot plus the snapshots of the
//! machines it can sense (bonded neighbours and machines whose fields reach
//! it) to its next internal state and a list of requested actions. It never
//! sees anything else, so every transition is local.
//!
//! Sub-rules run in a fixed order: shatter, unfold (overlap and stress),
//! stress counting, fold signalling, replication and splitting, mesh
//! membership, and finally bond requests.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::events::{Event, EventKind};
use crate::geometry::{arm_tip, normalize_angle, relative_bond_angle, ArmKind, BondKind, MachineBody};
use crate::params::{SimParamError, SimParams};
use crate::rulebook::state::{
    DerivedState, InternalState, MachineId, MachineState, SplitState, StrandPosition,
};
use crate::rulebook::tables::{
    bend_location, bend_location_bond_allowed, fold_angle, gene_up_bond_allowed, phene_up_bond_allowed, FoldAngle,
};

/// Folded strands turn clockwise when read left to right, which keeps the
/// overlap detector arms inside the loop and the up arms outside.
pub const FOLD_TURN_SIGN: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleParams {
    /// Steps without a new up neighbour before a strand folds.
    pub fold_limit: u32,
    /// Steps out of tolerance before a phene unfolds.
    pub stress_limit: u32,
    /// Steps the repellor fields stay on after a split.
    pub repel_duration: u32,
    /// Bond angle tolerance, degrees.
    pub tol_angle_deg: f64,
    /// Tip separation below which an attracting pair bonds, and above which
    /// an existing bond is out of tolerance.
    pub tol_dist: f64,
    /// Heading agreement required for overlap detection, degrees.
    pub tol_overlap_deg: f64,
}

impl Default for RuleParams {
    fn default() -> Self {
        RuleParams {
            fold_limit: 4000,
            stress_limit: 600,
            repel_duration: 120,
            tol_angle_deg: 15.0,
            tol_dist: 0.125,
            tol_overlap_deg: 20.0,
        }
    }
}

impl RuleParams {
    pub fn validate(&self) -> Result<(), SimParamError> {
        if self.fold_limit == 0 {
            return Err(SimParamError::Rule("fold_limit"));
        }
        if self.repel_duration == 0 {
            return Err(SimParamError::Rule("repel_duration"));
        }
        for (name, v) in [
            ("tol_angle_deg", self.tol_angle_deg),
            ("tol_dist", self.tol_dist),
            ("tol_overlap_deg", self.tol_overlap_deg),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SimParamError::Rule(name));
            }
        }
        Ok(())
    }
}

/// A bond refers to a machine that is not in the snapshot handed over.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("machine {machine} has a {arm} bond to {missing}, which is not in its neighbourhood")]
pub struct IntegrityError {
    pub machine: MachineId,
    pub missing: MachineId,
    pub arm: &'static str,
}

/// Read access to previous-step machine snapshots by id.
pub trait StateLookup {
    fn lookup(&self, id: MachineId) -> Option<&MachineState>;
}

impl StateLookup for [MachineState] {
    fn lookup(&self, id: MachineId) -> Option<&MachineState> {
        self.get(id.index()).filter(|m| m.id() == id)
    }
}

impl StateLookup for Vec<MachineState> {
    fn lookup(&self, id: MachineId) -> Option<&MachineState> {
        self.as_slice().lookup(id)
    }
}

/// What one machine can sense: bonded machines and machines in field range.
#[derive(Debug, Clone, Default)]
pub struct Neighbourhood<'a> {
    entries: SmallVec<[(&'a MachineState, DerivedState); 16]>,
}

impl<'a> Neighbourhood<'a> {
    pub fn new() -> Self {
        Neighbourhood { entries: SmallVec::new() }
    }

    pub fn push(&mut self, state: &'a MachineState, derived: DerivedState) {
        if !self.entries.iter().any(|(s, _)| s.id() == state.id()) {
            self.entries.push((state, derived));
        }
    }

    pub fn get(&self, id: MachineId) -> Option<(&'a MachineState, DerivedState)> {
        self.entries.iter().find(|(s, _)| s.id() == id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a MachineState, DerivedState)> + '_ {
        self.entries.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl StateLookup for Neighbourhood<'_> {
    fn lookup(&self, id: MachineId) -> Option<&MachineState> {
        self.get(id).map(|(s, _)| s)
    }
}

fn bonded<'a, L: StateLookup + ?Sized>(
    me: &MachineState,
    id: Option<MachineId>,
    arm: &'static str,
    lookup: &'a L,
) -> Result<Option<&'a MachineState>, IntegrityError> {
    match id {
        None => Ok(None),
        Some(id) => lookup
            .lookup(id)
            .map(Some)
            .ok_or(IntegrityError { machine: me.id(), missing: id, arm }),
    }
}

/// Why a machine lets go of a bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DropReason {
    Split,
    Unfold,
    OverlapRelease,
    Shatter,
}

impl DropReason {
    pub fn name(self) -> &'static str {
        match self {
            DropReason::Split => "split",
            DropReason::Unfold => "unfold",
            DropReason::OverlapRelease => "overlap",
            DropReason::Shatter => "shatter",
        }
    }
}

/// Which rule makes a pair of free arm slots attract and bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkKind {
    /// Free machine onto an unfolded strand member.
    GeneUp,
    /// Folded phene onto the mesh.
    PheneUp,
    /// Two copy machines whose templates are sideways-bonded.
    ChildSideways,
    /// The two open ends of a folded strand.
    Closure,
    Overlap,
}

/// A potential bond between `arm` of the evaluating machine and `other_arm`
/// of the other machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Link {
    pub kind: LinkKind,
    pub arm: ArmKind,
    pub other_arm: ArmKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    RequestBond { arm: ArmKind, target: MachineId, target_arm: ArmKind, kind: LinkKind },
    DropBond { arm: ArmKind, reason: DropReason },
    Emit(Event),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutomatonOutput {
    pub internal: InternalState,
    pub actions: Vec<Action>,
}

/// Table angle, in degrees, that a sideways bond should take. Zero unless
/// both machines are folded; undefined type pairs fall back to zero.
pub fn desired_sideways_angle(left: &MachineState, right: &MachineState) -> f64 {
    if left.internal.folded && right.internal.folded {
        fold_angle(left.machine_type(), right.machine_type()).degrees().map_or(0.0, f64::from)
    } else {
        0.0
    }
}

/// Target of [`relative_bond_angle`] for a bond, in radians.
pub fn desired_relative_angle(a: &MachineState, b: &MachineState, kind: BondKind) -> f64 {
    match kind {
        BondKind::Sideways => FOLD_TURN_SIGN * desired_sideways_angle(a, b).to_radians(),
        BondKind::Up => 0.0,
    }
}

fn tip_separation(a: &MachineState, arm_a: ArmKind, b: &MachineState, arm_b: ArmKind, body: &MachineBody) -> f64 {
    arm_tip(&a.pose, body, arm_a).distance(arm_tip(&b.pose, body, arm_b))
}

/// Angle and distance check for a single bond. `a` is the first machine of
/// the bond kind (the left machine of a sideways bond).
pub fn bond_in_tolerance(a: &MachineState, b: &MachineState, kind: BondKind, sim: &SimParams) -> bool {
    let (arm_a, arm_b) = kind.arms();
    let err = normalize_angle(relative_bond_angle(&a.pose, &b.pose, kind) - desired_relative_angle(a, b, kind));
    err.abs() <= sim.rules.tol_angle_deg.to_radians() && tip_separation(a, arm_a, b, arm_b, &sim.body) <= sim.rules.tol_dist
}

/// 1 iff every bond of the machine is within tolerance. A folded machine
/// with a missing sideways neighbour belongs to an open phene and is never
/// in tolerance.
pub fn in_tolerance<L: StateLookup + ?Sized>(m: &MachineState, lookup: &L, sim: &SimParams) -> Result<bool, IntegrityError> {
    let left = bonded(m, m.bonds.left, "left", lookup)?;
    let right = bonded(m, m.bonds.right, "right", lookup)?;
    let up = bonded(m, m.bonds.up, "up", lookup)?;
    if m.internal.folded && (left.is_none() || right.is_none()) {
        return Ok(false);
    }
    let ok = left.is_none_or(|l| bond_in_tolerance(l, m, BondKind::Sideways, sim))
        && right.is_none_or(|r| bond_in_tolerance(m, r, BondKind::Sideways, sim))
        && up.is_none_or(|u| bond_in_tolerance(m, u, BondKind::Up, sim));
    Ok(ok)
}

pub fn derive<L: StateLookup + ?Sized>(m: &MachineState, lookup: &L, sim: &SimParams) -> Result<DerivedState, IntegrityError> {
    let left = bonded(m, m.bonds.left, "left", lookup)?;
    let right = bonded(m, m.bonds.right, "right", lookup)?;
    Ok(DerivedState {
        in_tolerance: in_tolerance(m, lookup, sim)?,
        bend_location: bend_location(left.map(|s| s.machine_type()), right.map(|s| s.machine_type())),
    })
}

/// Type, fold and mesh conditions for an up bond between two machines whose
/// up fields overlap and whose up slots are empty.
pub fn up_bond_eligible(a: &MachineState, b: &MachineState, da: &DerivedState, db: &DerivedState) -> bool {
    if !(da.in_tolerance && db.in_tolerance) {
        return false;
    }
    let (ia, ib) = (&a.internal, &b.internal);
    let gene = !ia.folded
        && !ib.folded
        && ((a.bonds.is_strand_member() && b.is_free()) || (b.bonds.is_strand_member() && a.is_free()))
        && gene_up_bond_allowed(ia.machine_type, ib.machine_type);
    let phene = ia.folded
        && ib.folded
        && phene_up_bond_allowed(ia.machine_type, ib.machine_type)
        && bend_location_bond_allowed(da.bend_location, db.bend_location)
        && (ia.in_mesh || ib.in_mesh);
    gene || phene
}

fn signalling(i: &InternalState) -> bool {
    i.shatter || i.unfold
}

fn splitting(i: &InternalState) -> bool {
    i.split_state != SplitState::Replicating || i.repel_counter > 0
}

fn already_bonded(a: &MachineState, b: &MachineState) -> bool {
    a.bonds.iter().any(|(_, id)| id == b.id())
}

/// Every bond the two machines could form right now, as seen from `a`.
/// `a_up` is `a`'s up neighbour, if any; it is only consulted for copy
/// machines lining up beside each other.
pub fn candidate_links(
    a: &MachineState,
    da: &DerivedState,
    a_up: Option<&MachineState>,
    b: &MachineState,
    db: &DerivedState,
    sim: &SimParams,
) -> SmallVec<[Link; 2]> {
    let mut links = SmallVec::new();
    let (ia, ib) = (&a.internal, &b.internal);
    if a.id() == b.id() || signalling(ia) || signalling(ib) || already_bonded(a, b) {
        return links;
    }

    if a.bonds.up.is_none() && b.bonds.up.is_none() && !splitting(ia) && !splitting(ib) && up_bond_eligible(a, b, da, db) {
        let kind = if ia.folded { LinkKind::PheneUp } else { LinkKind::GeneUp };
        links.push(Link { kind, arm: ArmKind::Up, other_arm: ArmKind::Up });
    }

    if ia.copying && ib.copying && !ia.folded && !ib.folded {
        if let (Some(a_up), Some(b_up)) = (a_up, b.bonds.up) {
            // a's Right meets b's Left when a's template sits to the right of b's
            if a.bonds.right.is_none() && b.bonds.left.is_none() && a_up.bonds.left == Some(b_up) {
                links.push(Link { kind: LinkKind::ChildSideways, arm: ArmKind::Right, other_arm: ArmKind::Left });
            }
            if a.bonds.left.is_none() && b.bonds.right.is_none() && a_up.bonds.right == Some(b_up) {
                links.push(Link { kind: LinkKind::ChildSideways, arm: ArmKind::Left, other_arm: ArmKind::Right });
            }
        }
    }

    if ia.folded && ib.folded {
        if a.bonds.right.is_none() && b.bonds.left.is_none() && a.bonds.left.is_some() && b.bonds.right.is_some() {
            links.push(Link { kind: LinkKind::Closure, arm: ArmKind::Right, other_arm: ArmKind::Left });
        }
        if a.bonds.left.is_none() && b.bonds.right.is_none() && a.bonds.right.is_some() && b.bonds.left.is_some() {
            links.push(Link { kind: LinkKind::Closure, arm: ArmKind::Left, other_arm: ArmKind::Right });
        }
        let aligned = normalize_angle(a.pose.heading - b.pose.heading).abs() <= sim.rules.tol_overlap_deg.to_radians();
        if ia.in_mesh && ib.in_mesh && aligned && a.bonds.overlap.is_none() && b.bonds.overlap.is_none() {
            // an aligned pair is an overlap, never an up bond
            links.retain(|l| l.kind != LinkKind::PheneUp);
            links.push(Link { kind: LinkKind::Overlap, arm: ArmKind::OverlapDetector, other_arm: ArmKind::OverlapDetector });
        }
    }
    links
}

/// Tip separation at which a link becomes a bond. Overlap detection only
/// needs the two fields to touch.
pub fn capture_distance(kind: LinkKind, sim: &SimParams) -> f64 {
    match kind {
        LinkKind::Overlap => 2.0 * sim.physics.field_radius,
        _ => sim.rules.tol_dist,
    }
}

/// Tip separation of a link's two arms.
pub fn link_separation(a: &MachineState, b: &MachineState, link: &Link, body: &MachineBody) -> f64 {
    tip_separation(a, link.arm, b, link.other_arm, body)
}

struct Ctx<'a, 'h> {
    me: &'a MachineState,
    sim: &'a SimParams,
    step: u64,
    left: Option<&'h MachineState>,
    right: Option<&'h MachineState>,
    up: Option<&'h MachineState>,
}

impl Ctx<'_, '_> {
    fn event(&self, kind: EventKind) -> Event {
        Event::new(self.step, kind, vec![self.me.id()])
    }

    fn sideways(&self) -> impl Iterator<Item = &MachineState> {
        self.left.into_iter().chain(self.right)
    }
}

/// Advance one machine by one step.
///
/// All inputs are previous-step snapshots. The returned internal state
/// replaces the machine's; bond changes and events are returned as actions
/// for the engine to arbitrate and commit.
pub fn step_automaton(
    me: &MachineState,
    derived: &DerivedState,
    hood: &Neighbourhood<'_>,
    sim: &SimParams,
    step: u64,
) -> Result<AutomatonOutput, IntegrityError> {
    let cx = Ctx {
        me,
        sim,
        step,
        left: bonded(me, me.bonds.left, "left", hood)?,
        right: bonded(me, me.bonds.right, "right", hood)?,
        up: bonded(me, me.bonds.up, "up", hood)?,
    };
    bonded(me, me.bonds.overlap, "overlap", hood)?;

    let s = &me.internal;
    let mut n = *s;
    let mut actions: Vec<Action> = Vec::new();

    // one-step pulses
    n.reset_counter = false;
    n.fold_now = false;
    n.unfold = false;
    n.bond_lost = false;
    n.prev_up = me.bonds.up;

    // (1) shatter
    if s.shatter {
        for (arm, _) in me.bonds.iter() {
            actions.push(Action::DropBond { arm, reason: DropReason::Shatter });
        }
        n.reset_to_free();
        n.strand_position = StrandPosition::Interior;
        return Ok(AutomatonOutput { internal: n, actions });
    }
    if let Some(cause) = shatter_cause(&cx) {
        n.shatter = true;
        n.split_state = SplitState::Error;
        actions.push(Action::Emit(cx.event(EventKind::Shatter).with("cause", cause)));
        return Ok(AutomatonOutput { internal: n, actions });
    }

    // (2) unfold: overlap detection and stress
    if let Some(other) = me.bonds.overlap {
        actions.push(Action::DropBond { arm: ArmKind::OverlapDetector, reason: DropReason::OverlapRelease });
        if me.id() < other && s.folded {
            actions.push(Action::Emit(
                Event::new(step, EventKind::UnfoldStart, vec![me.id(), other]).with("cause", "overlap"),
            ));
            unfold(&cx, &mut n, &mut actions);
            return Ok(AutomatonOutput { internal: n, actions });
        }
    }
    if s.folded && s.stress_counter > sim.rules.stress_limit {
        actions.push(Action::Emit(cx.event(EventKind::UnfoldStart).with("cause", "stress")));
        unfold(&cx, &mut n, &mut actions);
        return Ok(AutomatonOutput { internal: n, actions });
    }
    if s.folded && cx.sideways().any(|nb| nb.internal.unfold) {
        unfold(&cx, &mut n, &mut actions);
        return Ok(AutomatonOutput { internal: n, actions });
    }

    // (3) stress
    n.stress_counter = if derived.in_tolerance { 0 } else { s.stress_counter.saturating_add(1) };

    if s.copying && me.bonds.up.is_none() {
        n.copying = false;
    }

    // (5) fold signalling
    fold_signals(&cx, &mut n, &mut actions);

    // (6) replication and splitting
    replication(&cx, &mut n, &mut actions);

    // (7) mesh membership
    if n.folded && !s.in_mesh && s.folded {
        if let Some(u) = cx.up.filter(|u| u.internal.in_mesh && u.internal.folded) {
            n.in_mesh = true;
            actions.push(Action::Emit(Event::new(step, EventKind::MeshJoin, vec![me.id(), u.id()])));
        } else if cx.left.is_some_and(|l| l.internal.in_mesh && bond_in_tolerance(l, me, BondKind::Sideways, sim))
            || cx.right.is_some_and(|r| r.internal.in_mesh && bond_in_tolerance(me, r, BondKind::Sideways, sim))
        {
            n.in_mesh = true;
        }
    }

    // (8) bond requests
    for (other, od) in hood.iter() {
        for link in candidate_links(me, derived, cx.up, other, &od, sim) {
            if link_separation(me, other, &link, &sim.body) <= capture_distance(link.kind, sim) {
                actions.push(Action::RequestBond { arm: link.arm, target: other.id(), target_arm: link.other_arm, kind: link.kind });
            }
        }
    }

    Ok(AutomatonOutput { internal: n, actions })
}

fn shatter_cause(cx: &Ctx<'_, '_>) -> Option<&'static str> {
    let s = &cx.me.internal;
    if s.bond_lost || s.split_state == SplitState::Error {
        return Some("bond-lost");
    }
    if s.copying && cx.up.is_none() && cx.me.bonds.is_strand_member() {
        return Some("orphaned-copy");
    }
    if cx.sideways().any(|nb| nb.internal.shatter) {
        return Some("sideways-neighbour");
    }
    if let Some(u) = cx.up {
        let ui = &u.internal;
        if ui.shatter && ui.replicated && !ui.folded {
            return Some("up-neighbour");
        }
        if !s.replicated && !s.folded && ui.folded {
            return Some("template-folded");
        }
    }
    let body = &cx.sim.body;
    let limit = cx.sim.physics.bond_break_distance;
    let stretched = cx.right.is_some_and(|r| tip_separation(cx.me, ArmKind::Right, r, ArmKind::Left, body) > limit)
        || cx.left.is_some_and(|l| tip_separation(cx.me, ArmKind::Left, l, ArmKind::Right, body) > limit)
        || cx.up.is_some_and(|u| tip_separation(cx.me, ArmKind::Up, u, ArmKind::Up, body) > limit);
    stretched.then_some("bond-stretched")
}

/// Revert to gene behaviour. A closed loop opens at the bond between its
/// original leftmost and rightmost machines.
fn unfold(cx: &Ctx<'_, '_>, n: &mut InternalState, actions: &mut Vec<Action>) {
    let s = &cx.me.internal;
    n.unfold = true;
    n.folded = false;
    n.in_mesh = false;
    n.fold_now = false;
    n.fold_counter = 0;
    n.stress_counter = 0;
    n.split_state = SplitState::Replicating;
    if cx.me.bonds.up.is_some() {
        actions.push(Action::DropBond { arm: ArmKind::Up, reason: DropReason::Unfold });
    }
    match s.strand_position {
        StrandPosition::Leftmost if cx.me.bonds.left.is_some() => {
            actions.push(Action::DropBond { arm: ArmKind::Left, reason: DropReason::Unfold })
        }
        StrandPosition::Rightmost if cx.me.bonds.right.is_some() => {
            actions.push(Action::DropBond { arm: ArmKind::Right, reason: DropReason::Unfold })
        }
        _ => {}
    }
}

fn fold_signals(cx: &Ctx<'_, '_>, n: &mut InternalState, actions: &mut Vec<Action>) {
    let me = cx.me;
    let s = &me.internal;
    if s.folded {
        return;
    }
    n.strand_position = StrandPosition::from_bonds(me.bonds.left.is_some(), me.bonds.right.is_some());

    let gained_up = me.bonds.up.is_some() && me.bonds.up != s.prev_up;
    if (gained_up && me.bonds.is_strand_member()) || cx.right.is_some_and(|r| r.internal.reset_counter) {
        n.reset_counter = true;
    }

    let leftmost = me.bonds.left.is_none() && me.bonds.right.is_some();
    if leftmost {
        n.fold_counter = if s.reset_counter { 0 } else { s.fold_counter.saturating_add(1) };
        // copies still attached to their template never decide to fold
        if n.fold_counter >= cx.sim.rules.fold_limit && !s.seed_gene && !s.copying {
            n.fold_now = true;
            n.folded = true;
            actions.push(Action::Emit(cx.event(EventKind::FoldStart)));
        }
    } else if cx.left.is_some_and(|l| l.internal.fold_now) && !s.seed_gene {
        n.fold_now = true;
        n.folded = true;
    }

    if n.folded {
        let undefined = cx.left.map(|l| (l, me)).into_iter().chain(cx.right.map(|r| (me, r)));
        for (l, r) in undefined {
            if fold_angle(l.machine_type(), r.machine_type()) == FoldAngle::Undefined {
                actions.push(Action::Emit(
                    Event::new(cx.step, EventKind::Diagnostic, vec![l.id(), r.id()])
                        .with("message", format!("no fold angle for types {}-{}; holding straight", l.machine_type(), r.machine_type())),
                ));
            }
        }
    }
}

/// Readiness wave left to right, split echo right to left, then each
/// template/copy pair releases its up bond once both sides are splitting.
fn replication(cx: &Ctx<'_, '_>, n: &mut InternalState, actions: &mut Vec<Action>) {
    let me = cx.me;
    let s = &me.internal;
    let rules = &cx.sim.rules;

    if s.repel_counter > 0 {
        n.repel_counter = s.repel_counter - 1;
        if n.repel_counter == 0 {
            n.split_state = SplitState::Replicating;
        }
        return;
    }
    if s.folded || n.folded || !me.bonds.is_strand_member() {
        if s.split_state != SplitState::Replicating && s.repel_counter == 0 {
            n.split_state = SplitState::Replicating;
        }
        return;
    }

    let Some(up) = cx.up else {
        // the pair came apart some other way; start over
        n.split_state = SplitState::Replicating;
        return;
    };

    match s.split_state {
        SplitState::Replicating | SplitState::Ready => {
            let covered = !up.internal.folded
                && cx.sideways().all(|nb| nb.bonds.up.is_some() && (up.bonds.left == nb.bonds.up || up.bonds.right == nb.bonds.up));
            if !covered {
                n.split_state = SplitState::Replicating;
                return;
            }
            if s.split_state == SplitState::Replicating {
                if cx.left.is_none_or(|l| l.internal.split_state >= SplitState::Ready) {
                    n.split_state = SplitState::Ready;
                }
            } else if cx.right.is_none_or(|r| r.internal.split_state == SplitState::Splitting) {
                n.split_state = SplitState::Splitting;
            }
        }
        SplitState::Splitting => {
            if up.internal.split_state == SplitState::Splitting {
                actions.push(Action::DropBond { arm: ArmKind::Up, reason: DropReason::Split });
                n.replicated = true;
                n.fold_counter = 0;
                n.stress_counter = 0;
                n.repel_counter = rules.repel_duration;
                if s.copying {
                    n.copying = false;
                    if up.internal.seed_phene {
                        n.folded = true;
                        n.in_mesh = true;
                        if me.bonds.left.is_none() {
                            actions.push(Action::Emit(cx.event(EventKind::SeedPheneCreated)));
                        }
                    }
                } else {
                    n.seed_phene = false;
                }
            }
        }
        SplitState::Error => {}
    }
}
