//! Bonding and folding tables.

use serde::{Deserialize, Serialize};

use crate::geometry::MachineType;

/// Up bonds between genes: likes attract, others are ignored.
pub fn gene_up_bond_allowed(a: MachineType, b: MachineType) -> bool {
    a == b
}

/// Up bonds between phenes in a mesh.
pub fn phene_up_bond_allowed(a: MachineType, b: MachineType) -> bool {
    use MachineType::*;
    matches!((a, b), (T2, T2) | (T3, T4) | (T4, T3) | (T4, T4))
}

/// Folded angle of a sideways bond, in whole degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FoldAngle {
    Degrees(u16),
    /// Type pair with no assigned angle.
    Undefined,
}

impl FoldAngle {
    pub fn degrees(self) -> Option<u16> {
        match self {
            FoldAngle::Degrees(d) => Some(d),
            FoldAngle::Undefined => None,
        }
    }
}

/// Row is the machine on the left of the bond, column the machine on the right.
pub fn fold_angle(left: MachineType, right: MachineType) -> FoldAngle {
    use MachineType::*;
    match (left, right) {
        (T1, _) | (_, T1) => FoldAngle::Degrees(0),
        (T2, T2) => FoldAngle::Degrees(120),
        (T2, T3) | (T3, T2) => FoldAngle::Degrees(45),
        (T2, T4) | (T4, T2) => FoldAngle::Degrees(90),
        (T4, T4) => FoldAngle::Degrees(60),
        (T3, T3) | (T3, T4) | (T4, T3) => FoldAngle::Undefined,
    }
}

/// Where a machine sits relative to the bends of its phene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BendLocation {
    RightOfBend = 1,
    LeftOfBend = 2,
    InBend = 3,
    Extender = 4,
}

impl BendLocation {
    pub const ALL: [BendLocation; 4] = [
        BendLocation::RightOfBend,
        BendLocation::LeftOfBend,
        BendLocation::InBend,
        BendLocation::Extender,
    ];

    pub fn value(self) -> u8 {
        self as u8
    }
}

/// Missing neighbours count as bending.
pub fn bend_location(left: Option<MachineType>, right: Option<MachineType>) -> BendLocation {
    let bends = |t: Option<MachineType>| t.is_none_or(MachineType::is_bending);
    match (bends(left), bends(right)) {
        (true, false) => BendLocation::RightOfBend,
        (false, true) => BendLocation::LeftOfBend,
        (true, true) => BendLocation::InBend,
        (false, false) => BendLocation::Extender,
    }
}

pub fn bend_location_bond_allowed(a: BendLocation, b: BendLocation) -> bool {
    use BendLocation::*;
    matches!((a, b), (RightOfBend, LeftOfBend) | (LeftOfBend, RightOfBend) | (InBend, InBend))
}

/// Types in the order a mirror-image copy reads them, left to right.
pub fn mirror_of_template(parent: &[MachineType]) -> Vec<MachineType> {
    parent.iter().rev().copied().collect()
}
