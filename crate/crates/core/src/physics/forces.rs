//! Field and bond forces between pairs of machines.
//!
//! Every pair force is equal and opposite. Torques are taken about each
//! machine's middle and need not cancel; the liquid absorbs the difference.

use serde::{Deserialize, Serialize};

use crate::geometry::{arm_tip, normalize_angle, relative_bond_angle, ArmKind, BondKind, MachineBody, Pose, Vec2};

use super::PhysicsParams;

/// Per-machine force and torque sum for one step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceAccumulator {
    pub fx: f64,
    pub fy: f64,
    pub torque: f64,
}

impl ForceAccumulator {
    pub fn add(&mut self, force: Vec2, torque: f64) {
        self.fx += force.x;
        self.fy += force.y;
        self.torque += torque;
    }

    pub fn force(&self) -> Vec2 {
        Vec2::new(self.fx, self.fy)
    }
}

/// Forces and torques one interaction applies to its two machines.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairForce {
    pub force_a: Vec2,
    pub force_b: Vec2,
    pub torque_a: f64,
    pub torque_b: f64,
}

impl PairForce {
    pub fn combine(self, o: PairForce) -> PairForce {
        PairForce {
            force_a: self.force_a + o.force_a,
            force_b: self.force_b + o.force_b,
            torque_a: self.torque_a + o.torque_a,
            torque_b: self.torque_b + o.torque_b,
        }
    }

    /// Applies `force` at `point` on A and the opposite force at `point_b` on B.
    fn at_points(a: &Pose, point_a: Vec2, b: &Pose, point_b: Vec2, force: Vec2) -> PairForce {
        PairForce {
            force_a: force,
            force_b: -force,
            torque_a: (point_a - a.middle()).cross(force),
            torque_b: (point_b - b.middle()).cross(-force),
        }
    }
}

/// Linear spring pulling arm tip `arm_a` of A towards `arm_b` of B.
/// Potential `½ k |tip_b − tip_a|²`.
pub fn tip_spring(a: &Pose, arm_a: ArmKind, b: &Pose, arm_b: ArmKind, body: &MachineBody, k: f64) -> PairForce {
    let ta = arm_tip(a, body, arm_a);
    let tb = arm_tip(b, body, arm_b);
    PairForce::at_points(a, ta, b, tb, (tb - ta) * k)
}

/// Twist about the bond driving the relative angle towards `desired`.
/// Potential `½ k Δθ²` with `Δθ = normalize(relative − desired)`.
pub fn twist(a: &Pose, b: &Pose, kind: BondKind, desired: f64, k: f64) -> PairForce {
    let err = normalize_angle(relative_bond_angle(a, b, kind) - desired);
    PairForce { torque_a: k * err, torque_b: -k * err, ..Default::default() }
}

/// Spring plus twist for an existing bond. A is the first machine of `kind`
/// (for sideways bonds, the one whose Right arm is bonded).
pub fn bond_forces(a: &Pose, b: &Pose, body: &MachineBody, kind: BondKind, desired: f64, params: &PhysicsParams) -> PairForce {
    let (arm_a, arm_b) = kind.arms();
    tip_spring(a, arm_a, b, arm_b, body, params.spring_k).combine(twist(a, b, kind, desired, params.twist_k))
}

/// Repulsion between two active repellor tips, `repel_k · (range − separation)`
/// along the line joining them. Zero at or beyond the field range.
pub fn repellor_force(a: &Pose, b: &Pose, body: &MachineBody, params: &PhysicsParams) -> PairForce {
    let ta = arm_tip(a, body, ArmKind::Repellor);
    let tb = arm_tip(b, body, ArmKind::Repellor);
    let sep = ta.distance(tb);
    if sep >= params.repel_radius {
        return PairForce::default();
    }
    let dir = if sep > 1e-12 {
        (ta - tb) * (1.0 / sep)
    } else {
        // coincident tips: push the middles apart instead
        let d = a.middle() - b.middle();
        let n = d.norm();
        if n > 1e-12 {
            d * (1.0 / n)
        } else {
            Vec2::new(1.0, 0.0)
        }
    };
    PairForce::at_points(a, ta, b, tb, dir * (params.repel_k * (params.repel_radius - sep)))
}
