use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::geometry::{arm_tip, ArmKind, MachineType, Pose, Vec2};
use crate::params::{SimParamError, SimParams};
use crate::physics::{IndexMode, Xorshift64Star};
use crate::rulebook::{partner_arm, MachineId, MachineState, StrandPosition};
use crate::seedlab::SeedSpec;

/// Free machines to scatter around the seed, per type.
pub type FreeCounts = BTreeMap<MachineType, u32>;

const PLACEMENT_ATTEMPTS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InitError {
    #[error(transparent)]
    Params(#[from] SimParamError),
    #[error("the seed ({len} machines, {width:.2} wide) does not fit in a {container:.2} wide container")]
    SeedTooWide { len: usize, width: f64, container: f64 },
    #[error("container too small: placed {placed} of {wanted} free machines, {} short", wanted - placed)]
    ContainerTooSmall { placed: usize, wanted: usize },
    #[error(transparent)]
    Invalid(#[from] WorldError),
}

/// A bond slot that does not agree with its partner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error("machine {0} is bonded to itself")]
    SelfBond(MachineId),
    #[error("machine {a} {arm} slot names {b}, which does not point back")]
    Asymmetric { a: MachineId, b: MachineId, arm: &'static str },
    #[error("machine {a} {arm} slot names unknown machine {b}")]
    Dangling { a: MachineId, b: MachineId, arm: &'static str },
    #[error("machine {0} is a folded seed gene")]
    FoldedSeedGene(MachineId),
    #[error("machine {0} has a non-finite pose or velocity")]
    NonFinite(MachineId),
    #[error("machine {0} has left the container")]
    OutOfBounds(MachineId),
    #[error("machine at index {index} carries id {id}")]
    IdMismatch { index: usize, id: MachineId },
}

/// The container, its machines, the step counter, and the random stream.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub(crate) sim: SimParams,
    pub(crate) machines: Vec<MachineState>,
    pub(crate) step: u64,
    pub(crate) rng: Xorshift64Star,
    pub(crate) index_mode: IndexMode,
}

impl World {
    /// A straight seed gene across the middle of the container and a
    /// uniform random scatter of free machines whose fields touch nothing.
    pub fn init(sim: SimParams, seed: &SeedSpec, free: &FreeCounts, rng_seed: u64) -> Result<World, InitError> {
        sim.validate()?;
        let phys = &sim.physics;
        let body = &sim.body;
        let pitch = body.sideways_pitch();
        let n = seed.len();
        let width = (n - 1) as f64 * pitch;
        if width > phys.container_width {
            return Err(InitError::SeedTooWide { len: n, width, container: phys.container_width });
        }

        let mut machines = Vec::new();
        let (cx, cy) = (phys.container_width / 2.0, phys.container_height / 2.0);
        for (i, &t) in seed.types().iter().enumerate() {
            let id = MachineId(i as u32);
            let mut m = MachineState::new(id, t, Pose::new(cx - width / 2.0 + i as f64 * pitch, cy, 0.0));
            m.internal.seed_gene = true;
            m.internal.seed_phene = true;
            m.bonds.left = i.checked_sub(1).map(|j| MachineId(j as u32));
            m.bonds.right = (i + 1 < n).then(|| MachineId(i as u32 + 1));
            machines.push(m);
        }
        for m in &mut machines {
            m.internal.strand_position = StrandPosition::from_bonds(m.bonds.left.is_some(), m.bonds.right.is_some());
        }

        let mut rng = Xorshift64Star::seed_from(rng_seed);
        let wanted: usize = free.values().map(|&c| c as usize).sum();
        let margin = body.max_arm_length().min(phys.container_width / 4.0).min(phys.container_height / 4.0);
        let clearance = 2.0 * phys.field_radius;
        let mut tips: Vec<Vec2> = machines.iter().flat_map(|m| all_tips(&m.pose, &sim)).collect();
        let mut placed = 0;
        for (&t, &count) in free {
            for _ in 0..count {
                let mut ok = None;
                for _ in 0..PLACEMENT_ATTEMPTS {
                    let pose = Pose::new(
                        rng.gen_range(margin..=phys.container_width - margin),
                        rng.gen_range(margin..=phys.container_height - margin),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    );
                    let mine = all_tips(&pose, &sim);
                    let clear = machines.iter().all(|m| m.pose.middle().distance(pose.middle()) >= clearance)
                        && mine.iter().all(|a| tips.iter().all(|b| a.distance(*b) >= clearance));
                    if clear {
                        ok = Some((pose, mine));
                        break;
                    }
                }
                let Some((pose, mine)) = ok else {
                    return Err(InitError::ContainerTooSmall { placed, wanted });
                };
                tips.extend(mine);
                machines.push(MachineState::new(MachineId(machines.len() as u32), t, pose));
                placed += 1;
            }
        }
        Ok(World { sim, machines, step: 0, rng, index_mode: IndexMode::default() })
    }

    /// A world from hand-placed machines, for scripted scenarios. Ids must
    /// equal positions and bonds must be symmetric.
    pub fn from_machines(sim: SimParams, machines: Vec<MachineState>, rng_seed: u64) -> Result<World, InitError> {
        sim.validate()?;
        let w = World { sim, machines, step: 0, rng: Xorshift64Star::seed_from(rng_seed), index_mode: IndexMode::default() };
        w.check_invariants()?;
        Ok(w)
    }

    pub fn params(&self) -> &SimParams {
        &self.sim
    }

    pub fn machines(&self) -> &[MachineState] {
        &self.machines
    }

    pub fn machine(&self, id: MachineId) -> Option<&MachineState> {
        self.machines.get(id.index())
    }

    pub fn len(&self) -> usize {
        self.machines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machines.is_empty()
    }

    pub fn step_number(&self) -> u64 {
        self.step
    }

    pub fn rng_state(&self) -> u64 {
        self.rng.state()
    }

    pub fn index_mode(&self) -> IndexMode {
        self.index_mode
    }

    pub fn set_index_mode(&mut self, mode: IndexMode) {
        self.index_mode = mode;
    }

    /// Edit a machine between steps. The next step re-checks every invariant.
    pub fn edit(&mut self, id: MachineId, f: impl FnOnce(&mut MachineState)) {
        f(&mut self.machines[id.index()]);
    }

    /// Tear a bond away from outside the rules. Both machines notice the
    /// loss on the next step.
    pub fn sever_bond(&mut self, id: MachineId, arm: ArmKind) -> Option<MachineId> {
        let other = self.machines[id.index()].bonds.slot_mut(arm)?.take()?;
        if let Some(slot) = self.machines[other.index()].bonds.slot_mut(partner_arm(arm)) {
            *slot = None;
        }
        self.machines[id.index()].internal.bond_lost = true;
        self.machines[other.index()].internal.bond_lost = true;
        Some(other)
    }

    pub fn set_pose(&mut self, id: MachineId, pose: Pose) {
        self.machines[id.index()].pose = pose;
    }

    /// Bond symmetry, id layout, finiteness, containment, and the seed-gene rule.
    pub fn check_invariants(&self) -> Result<(), WorldError> {
        let phys = &self.sim.physics;
        for (index, m) in self.machines.iter().enumerate() {
            let id = m.id();
            if id.index() != index {
                return Err(WorldError::IdMismatch { index, id });
            }
            for (arm, other) in m.bonds.iter() {
                if other == id {
                    return Err(WorldError::SelfBond(id));
                }
                let Some(o) = self.machines.get(other.index()) else {
                    return Err(WorldError::Dangling { a: id, b: other, arm: arm.name() });
                };
                if o.bonds.slot(partner_arm(arm)) != Some(id) {
                    return Err(WorldError::Asymmetric { a: id, b: other, arm: arm.name() });
                }
            }
            if m.internal.seed_gene && m.internal.folded {
                return Err(WorldError::FoldedSeedGene(id));
            }
            if !(m.pose.is_finite() && m.kin.is_finite()) {
                return Err(WorldError::NonFinite(id));
            }
            let p = m.pose.middle();
            if p.x < 0.0 || p.y < 0.0 || p.x > phys.container_width || p.y > phys.container_height {
                return Err(WorldError::OutOfBounds(id));
            }
        }
        Ok(())
    }

    /// Number of machines per type.
    pub fn type_histogram(&self) -> FreeCounts {
        let mut h = FreeCounts::new();
        for m in &self.machines {
            *h.entry(m.machine_type()).or_default() += 1;
        }
        h
    }
}

fn all_tips(pose: &Pose, sim: &SimParams) -> Vec<Vec2> {
    ArmKind::ALL.iter().map(|&a| arm_tip(pose, &sim.body, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seedlab::parse_seed;

    fn free(pairs: &[(u8, u32)]) -> FreeCounts {
        pairs.iter().map(|&(t, c)| (MachineType::try_from(t).unwrap(), c)).collect()
    }

    #[test]
    fn triangle_soup() {
        let w = World::init(SimParams::default(), &parse_seed("2-2-2").unwrap(), &free(&[(2, 54)]), 1).unwrap();
        assert_eq!(w.len(), 57);
        assert_eq!(w.machines().iter().filter(|m| !m.is_free()).count(), 3);
        assert!(w.machines()[..3].iter().all(|m| m.internal.seed_gene && m.internal.seed_phene && !m.internal.folded));
        w.check_invariants().unwrap();
    }

    #[test]
    fn empty_soup_and_histogram() {
        let w = World::init(SimParams::default(), &parse_seed("2-2-2").unwrap(), &FreeCounts::new(), 1).unwrap();
        assert_eq!(w.len(), 3);
        let w = World::init(SimParams::default(), &parse_seed("4-2-4-2").unwrap(), &free(&[(2, 100), (4, 100)]), 1).unwrap();
        assert_eq!(w.len(), 204);
        assert_eq!(w.type_histogram(), free(&[(2, 102), (4, 102)]));
    }

    #[test]
    fn overcrowding_names_the_deficit() {
        let sim = SimParams::default().with_container(8.0, 8.0);
        match World::init(sim, &parse_seed("2-2-2").unwrap(), &free(&[(2, 500)]), 1) {
            Err(InitError::ContainerTooSmall { placed, wanted: 500 }) => assert!(placed < 500),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn severing_is_symmetric() {
        let mut w = World::init(SimParams::default(), &parse_seed("2-2-2").unwrap(), &FreeCounts::new(), 1).unwrap();
        assert_eq!(w.sever_bond(MachineId(1), ArmKind::Left), Some(MachineId(0)));
        assert_eq!(w.machines()[0].bonds.right, None);
        assert!(w.machines()[0].internal.bond_lost && w.machines()[1].internal.bond_lost);
        w.check_invariants().unwrap();
    }
}
