//! Binary world snapshots. The byte layout is documented in
//! `docs/checkpoint-format.md`; every integer and float is little-endian.

use thiserror::Error;

use crate::geometry::{ArmKind, Kinematics, MachineBody, MachineType, Pose};
use crate::params::{SimParamError, SimParams};
use crate::physics::{IndexMode, PhysicsParams, Xorshift64Star};
use crate::rulebook::{BondSet, InternalState, MachineId, MachineState, RuleParams, SplitState, StrandPosition};

use super::world::{World, WorldError};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"JV2S";
pub const CHECKPOINT_VERSION: u32 = 1;

const NONE_ID: u32 = u32::MAX;

const FLAGS: [&str; 11] = [
    "reset_counter",
    "fold_now",
    "unfold",
    "seed_gene",
    "seed_phene",
    "in_mesh",
    "replicated",
    "shatter",
    "folded",
    "copying",
    "bond_lost",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckpointError {
    #[error("not a checkpoint (bad magic bytes)")]
    BadMagic,
    #[error("checkpoint format version {found} is not supported (expected {CHECKPOINT_VERSION})")]
    Version { found: u32 },
    #[error("checkpoint truncated at byte {offset} while reading {field}")]
    Truncated { offset: usize, field: &'static str },
    #[error("checkpoint field {field} at byte {offset} is out of range")]
    Field { offset: usize, field: &'static str },
    #[error("{0} unexpected bytes after the last machine record")]
    Trailing(usize),
    #[error("checkpoint parameters are invalid: {0}")]
    Params(#[from] SimParamError),
    #[error("checkpoint world is inconsistent: {0}")]
    World(#[from] WorldError),
}

fn physics_fields(p: &PhysicsParams) -> [f64; 17] {
    [
        p.dt,
        p.field_radius,
        p.spring_k,
        p.twist_k,
        p.repel_k,
        p.repel_radius,
        p.brownian_linear_sigma,
        p.brownian_angular_sigma,
        p.linear_drag,
        p.angular_drag,
        p.mass,
        p.inertia,
        p.speed_clamp,
        p.angular_speed_clamp,
        p.container_width,
        p.container_height,
        p.bond_break_distance,
    ]
}

fn physics_from(v: [f64; 17]) -> PhysicsParams {
    PhysicsParams {
        dt: v[0],
        field_radius: v[1],
        spring_k: v[2],
        twist_k: v[3],
        repel_k: v[4],
        repel_radius: v[5],
        brownian_linear_sigma: v[6],
        brownian_angular_sigma: v[7],
        linear_drag: v[8],
        angular_drag: v[9],
        mass: v[10],
        inertia: v[11],
        speed_clamp: v[12],
        angular_speed_clamp: v[13],
        container_width: v[14],
        container_height: v[15],
        bond_break_distance: v[16],
    }
}

fn flags_of(s: &InternalState) -> u16 {
    let bits = [
        s.reset_counter,
        s.fold_now,
        s.unfold,
        s.seed_gene,
        s.seed_phene,
        s.in_mesh,
        s.replicated,
        s.shatter,
        s.folded,
        s.copying,
        s.bond_lost,
    ];
    bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u16::from(b) << i))
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn id(&mut self, v: Option<MachineId>) {
        self.u32(v.map_or(NONE_ID, |id| id.0));
    }
}

/// Serialises every field of the world, including the random stream.
pub fn checkpoint(world: &World) -> Vec<u8> {
    let mut w = Writer(Vec::with_capacity(256 + world.len() * 120));
    w.0.extend_from_slice(&CHECKPOINT_MAGIC);
    w.u32(CHECKPOINT_VERSION);
    let sim = &world.sim;
    for v in physics_fields(&sim.physics) {
        w.f64(v);
    }
    let r = &sim.rules;
    w.u32(r.fold_limit);
    w.u32(r.stress_limit);
    w.u32(r.repel_duration);
    w.f64(r.tol_angle_deg);
    w.f64(r.tol_dist);
    w.f64(r.tol_overlap_deg);
    for arm in [ArmKind::Left, ArmKind::Up, ArmKind::Repellor, ArmKind::OverlapDetector] {
        w.f64(sim.body.arm_length(arm));
    }
    w.u8(match world.index_mode {
        IndexMode::Grid => 0,
        IndexMode::BruteForce => 1,
    });
    w.u64(world.step);
    w.u64(world.rng.state());
    w.u32(world.machines.len() as u32);
    for m in &world.machines {
        let s = &m.internal;
        w.u32(s.id.0);
        w.u8(s.machine_type.get());
        w.u32(s.fold_counter);
        w.u32(s.repel_counter);
        w.u32(s.stress_counter);
        w.u8(s.strand_position.value());
        w.u8(s.split_state.value());
        w.u16(flags_of(s));
        w.id(s.prev_up);
        w.id(m.bonds.left);
        w.id(m.bonds.right);
        w.id(m.bonds.up);
        w.id(m.bonds.overlap);
        for v in [m.pose.x, m.pose.y, m.pose.heading, m.kin.vx, m.kin.vy, m.kin.omega] {
            w.f64(v);
        }
    }
    w.0
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self, field: &'static str) -> Result<[u8; N], CheckpointError> {
        let end = self.at + N;
        let slice = self.bytes.get(self.at..end).ok_or(CheckpointError::Truncated { offset: self.at, field })?;
        self.at = end;
        Ok(slice.try_into().expect("slice has length N"))
    }
    fn u8(&mut self, field: &'static str) -> Result<u8, CheckpointError> {
        Ok(self.take::<1>(field)?[0])
    }
    fn u16(&mut self, field: &'static str) -> Result<u16, CheckpointError> {
        Ok(u16::from_le_bytes(self.take(field)?))
    }
    fn u32(&mut self, field: &'static str) -> Result<u32, CheckpointError> {
        Ok(u32::from_le_bytes(self.take(field)?))
    }
    fn u64(&mut self, field: &'static str) -> Result<u64, CheckpointError> {
        Ok(u64::from_le_bytes(self.take(field)?))
    }
    fn f64(&mut self, field: &'static str) -> Result<f64, CheckpointError> {
        Ok(f64::from_le_bytes(self.take(field)?))
    }
    fn id(&mut self, field: &'static str, count: u32) -> Result<Option<MachineId>, CheckpointError> {
        let offset = self.at;
        match self.u32(field)? {
            NONE_ID => Ok(None),
            v if v < count => Ok(Some(MachineId(v))),
            _ => Err(CheckpointError::Field { offset, field }),
        }
    }
    /// Reads a value and maps it, reporting `field` at its offset on failure.
    fn checked<T, U>(
        &mut self,
        field: &'static str,
        read: impl FnOnce(&mut Self, &'static str) -> Result<T, CheckpointError>,
        map: impl FnOnce(T) -> Option<U>,
    ) -> Result<U, CheckpointError> {
        let offset = self.at;
        let v = read(self, field)?;
        map(v).ok_or(CheckpointError::Field { offset, field })
    }
}

/// Rebuilds a world from [`checkpoint`] bytes. Either the whole world loads
/// and passes every invariant check, or nothing does.
pub fn restore(bytes: &[u8]) -> Result<World, CheckpointError> {
    let mut r = Reader { bytes, at: 0 };
    if r.take::<4>("magic").map_err(|_| CheckpointError::BadMagic)? != CHECKPOINT_MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = r.u32("version")?;
    if version != CHECKPOINT_VERSION {
        return Err(CheckpointError::Version { found: version });
    }
    let mut phys = [0.0; 17];
    for v in &mut phys {
        *v = r.f64("physics")?;
    }
    let rules = RuleParams {
        fold_limit: r.u32("fold_limit")?,
        stress_limit: r.u32("stress_limit")?,
        repel_duration: r.u32("repel_duration")?,
        tol_angle_deg: r.f64("tol_angle_deg")?,
        tol_dist: r.f64("tol_dist")?,
        tol_overlap_deg: r.f64("tol_overlap_deg")?,
    };
    let mut arms = [0.0; 4];
    for v in &mut arms {
        *v = r.f64("body")?;
    }
    let body = MachineBody::new(arms[0], arms[1], arms[2], arms[3]).map_err(SimParamError::from)?;
    let sim = SimParams { physics: physics_from(phys), rules, body };
    sim.validate()?;
    let index_mode = r.checked("index_mode", Reader::u8, |v| match v {
        0 => Some(IndexMode::Grid),
        1 => Some(IndexMode::BruteForce),
        _ => None,
    })?;
    let step = r.u64("step")?;
    let rng = r.checked("rng_state", Reader::u64, Xorshift64Star::from_state)?;
    let count = r.u32("machine_count")?;

    let mut machines = Vec::with_capacity(count.min(1 << 20) as usize);
    for i in 0..count {
        let id = r.checked("id", Reader::u32, |v| (v == i).then_some(MachineId(v)))?;
        let machine_type = r.checked("type", Reader::u8, |v| MachineType::try_from(v).ok())?;
        let mut s = InternalState::new(id, machine_type);
        s.fold_counter = r.u32("fold_counter")?;
        s.repel_counter = r.u32("repel_counter")?;
        s.stress_counter = r.u32("stress_counter")?;
        s.strand_position = r.checked("strand_position", Reader::u8, StrandPosition::from_value)?;
        s.split_state = r.checked("split_state", Reader::u8, SplitState::from_value)?;
        let flags = r.checked("flags", Reader::u16, |v| (v >> FLAGS.len() == 0).then_some(v))?;
        let bit = |i: usize| flags & (1 << i) != 0;
        s.reset_counter = bit(0);
        s.fold_now = bit(1);
        s.unfold = bit(2);
        s.seed_gene = bit(3);
        s.seed_phene = bit(4);
        s.in_mesh = bit(5);
        s.replicated = bit(6);
        s.shatter = bit(7);
        s.folded = bit(8);
        s.copying = bit(9);
        s.bond_lost = bit(10);
        s.prev_up = r.id("prev_up", count)?;
        let bonds = BondSet {
            left: r.id("left", count)?,
            right: r.id("right", count)?,
            up: r.id("up", count)?,
            overlap: r.id("overlap", count)?,
        };
        let pose = Pose { x: r.f64("x")?, y: r.f64("y")?, heading: r.f64("heading")? };
        let kin = Kinematics { vx: r.f64("vx")?, vy: r.f64("vy")?, omega: r.f64("omega")? };
        machines.push(MachineState { internal: s, bonds, pose, kin });
    }
    if r.at != bytes.len() {
        return Err(CheckpointError::Trailing(bytes.len() - r.at));
    }
    let world = World { sim, machines, step, rng, index_mode };
    world.check_invariants()?;
    Ok(world)
}
