//! The per-machine state vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{ArmKind, Kinematics, MachineType, Pose};
use crate::rulebook::tables::BendLocation;

/// Unique, never reused machine identifier. Also the machine's index in the world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MachineId(pub u32);

impl MachineId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrandPosition {
    Leftmost = 1,
    Interior = 2,
    Rightmost = 3,
}

impl StrandPosition {
    pub fn from_bonds(has_left: bool, has_right: bool) -> Self {
        match (has_left, has_right) {
            (false, true) => StrandPosition::Leftmost,
            (true, false) => StrandPosition::Rightmost,
            _ => StrandPosition::Interior,
        }
    }

    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn from_value(v: u8) -> Option<Self> {
        match v {
            1 => Some(StrandPosition::Leftmost),
            2 => Some(StrandPosition::Interior),
            3 => Some(StrandPosition::Rightmost),
            _ => None,
        }
    }
}

/// Progress of a double strand towards splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SplitState {
    Replicating = 1,
    /// Covered, and every machine to the left is ready too.
    Ready = 2,
    Splitting = 3,
    /// Replication went wrong; the machine is shattering.
    Error = 4,
}

impl SplitState {
    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn from_value(v: u8) -> Option<Self> {
        match v {
            1 => Some(SplitState::Replicating),
            2 => Some(SplitState::Ready),
            3 => Some(SplitState::Splitting),
            4 => Some(SplitState::Error),
            _ => None,
        }
    }
}

/// Discrete internal state. `machine_type` and `id` never change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalState {
    pub machine_type: MachineType,
    pub id: MachineId,
    pub fold_counter: u32,
    pub repel_counter: u32,
    pub stress_counter: u32,
    pub strand_position: StrandPosition,
    pub split_state: SplitState,
    pub reset_counter: bool,
    pub fold_now: bool,
    pub unfold: bool,
    pub seed_gene: bool,
    pub seed_phene: bool,
    pub in_mesh: bool,
    pub replicated: bool,
    pub shatter: bool,
    pub folded: bool,
    /// Up neighbour as of the previous step; detects newly gained up bonds.
    pub prev_up: Option<MachineId>,
    /// Joined a template as a free machine and has not split off yet.
    pub copying: bool,
    /// A bond was torn away from outside the rules since the last step.
    pub bond_lost: bool,
}

impl InternalState {
    pub fn new(id: MachineId, machine_type: MachineType) -> Self {
        InternalState {
            machine_type,
            id,
            fold_counter: 0,
            repel_counter: 0,
            stress_counter: 0,
            strand_position: StrandPosition::Interior,
            split_state: SplitState::Replicating,
            reset_counter: false,
            fold_now: false,
            unfold: false,
            seed_gene: false,
            seed_phene: false,
            in_mesh: false,
            replicated: false,
            shatter: false,
            folded: false,
            prev_up: None,
            copying: false,
            bond_lost: false,
        }
    }

    /// Back to a plain free machine after dropping every bond.
    pub fn reset_to_free(&mut self) {
        *self = InternalState::new(self.id, self.machine_type);
    }
}

/// Neighbour ids by arm slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BondSet {
    pub left: Option<MachineId>,
    pub right: Option<MachineId>,
    pub up: Option<MachineId>,
    /// Transient bond between overlap detector arms.
    pub overlap: Option<MachineId>,
}

impl BondSet {
    pub fn slot(&self, arm: ArmKind) -> Option<MachineId> {
        match arm {
            ArmKind::Left => self.left,
            ArmKind::Right => self.right,
            ArmKind::Up => self.up,
            ArmKind::OverlapDetector => self.overlap,
            ArmKind::Repellor => None,
        }
    }

    pub fn slot_mut(&mut self, arm: ArmKind) -> Option<&mut Option<MachineId>> {
        match arm {
            ArmKind::Left => Some(&mut self.left),
            ArmKind::Right => Some(&mut self.right),
            ArmKind::Up => Some(&mut self.up),
            ArmKind::OverlapDetector => Some(&mut self.overlap),
            ArmKind::Repellor => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArmKind, MachineId)> + '_ {
        [
            (ArmKind::Left, self.left),
            (ArmKind::Right, self.right),
            (ArmKind::Up, self.up),
            (ArmKind::OverlapDetector, self.overlap),
        ]
        .into_iter()
        .filter_map(|(arm, id)| id.map(|id| (arm, id)))
    }

    pub fn is_empty(&self) -> bool {
        self.iter().next().is_none()
    }

    pub fn count(&self) -> usize {
        self.iter().count()
    }

    pub fn is_strand_member(&self) -> bool {
        self.left.is_some() || self.right.is_some()
    }
}

/// Recomputed from scratch every step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedState {
    pub in_tolerance: bool,
    pub bend_location: BendLocation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MachineState {
    pub internal: InternalState,
    pub bonds: BondSet,
    pub pose: Pose,
    pub kin: Kinematics,
}

impl MachineState {
    pub fn new(id: MachineId, machine_type: MachineType, pose: Pose) -> Self {
        MachineState {
            internal: InternalState::new(id, machine_type),
            bonds: BondSet::default(),
            pose,
            kin: Kinematics::default(),
        }
    }

    pub fn id(&self) -> MachineId {
        self.internal.id
    }

    pub fn machine_type(&self) -> MachineType {
        self.internal.machine_type
    }

    pub fn is_free(&self) -> bool {
        self.bonds.is_empty()
    }
}

/// The arm on the other side of a bond that uses `arm`.
pub fn partner_arm(arm: ArmKind) -> ArmKind {
    match arm {
        ArmKind::Left => ArmKind::Right,
        ArmKind::Right => ArmKind::Left,
        other => other,
    }
}
