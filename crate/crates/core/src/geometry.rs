//! Machine body geometry: the five arms, poses and arm-tip positions.
//!
//! A machine is a plus sign. In canonical position (heading 0) the Left and
//! Right arms lie along the x axis, the Up and Repellor arms point along +y
//! and the short OverlapDetector arm points along -y. The heading rotates
//! the whole body counter-clockwise about the middle.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the four machine types. No other value can be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum MachineType {
    T1 = 1,
    T2 = 2,
    T3 = 3,
    T4 = 4,
}

impl MachineType {
    pub const ALL: [MachineType; 4] = [MachineType::T1, MachineType::T2, MachineType::T3, MachineType::T4];

    pub fn get(self) -> u8 {
        self as u8
    }

    /// Type 1 keeps sideways bonds straight; the others bend.
    pub fn is_bending(self) -> bool {
        self != MachineType::T1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("machine type must be 1, 2, 3 or 4 (got {0})")]
pub struct InvalidMachineType(pub u8);

impl TryFrom<u8> for MachineType {
    type Error = InvalidMachineType;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        match value {
            1 => Ok(MachineType::T1),
            2 => Ok(MachineType::T2),
            3 => Ok(MachineType::T3),
            4 => Ok(MachineType::T4),
            other => Err(InvalidMachineType(other)),
        }
    }
}

impl From<MachineType> for u8 {
    fn from(t: MachineType) -> u8 {
        t as u8
    }
}

impl fmt::Display for MachineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArmKind {
    Left,
    Right,
    Up,
    Repellor,
    OverlapDetector,
}

impl ArmKind {
    pub const ALL: [ArmKind; 5] = [
        ArmKind::Left,
        ArmKind::Right,
        ArmKind::Up,
        ArmKind::Repellor,
        ArmKind::OverlapDetector,
    ];

    /// Unit vector of the arm in canonical position.
    pub fn canonical_direction(self) -> Vec2 {
        match self {
            ArmKind::Left => Vec2::new(-1.0, 0.0),
            ArmKind::Right => Vec2::new(1.0, 0.0),
            ArmKind::Up | ArmKind::Repellor => Vec2::new(0.0, 1.0),
            ArmKind::OverlapDetector => Vec2::new(0.0, -1.0),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ArmKind::Left => "left",
            ArmKind::Right => "right",
            ArmKind::Up => "up",
            ArmKind::Repellor => "repellor",
            ArmKind::OverlapDetector => "overlap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn rotate(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Rotated by +90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BodyError {
    #[error("arm lengths must be finite and positive")]
    NonPositive,
    #[error("arm lengths must satisfy left/right > up > repellor, overlap detector (got {0:?})")]
    Ordering([f64; 5]),
}

/// Arm lengths of the plus-shaped body. Directions are fixed by [`ArmKind`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyLengths", into = "BodyLengths")]
pub struct MachineBody {
    lengths: [f64; 5],
}

impl MachineBody {
    /// `side` is shared by the Left and Right arms.
    pub fn new(side: f64, up: f64, repellor: f64, overlap_detector: f64) -> Result<Self, BodyError> {
        let lengths = [side, side, up, repellor, overlap_detector];
        if lengths.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(BodyError::NonPositive);
        }
        if !(up < side && repellor < up && overlap_detector < up) {
            return Err(BodyError::Ordering(lengths));
        }
        Ok(MachineBody { lengths })
    }

    pub fn arm_length(&self, arm: ArmKind) -> f64 {
        self.lengths[arm.index()]
    }

    pub fn max_arm_length(&self) -> f64 {
        self.lengths.iter().copied().fold(0.0, f64::max)
    }

    /// Distance between the middles of two sideways-bonded machines at rest.
    pub fn sideways_pitch(&self) -> f64 {
        self.arm_length(ArmKind::Left) + self.arm_length(ArmKind::Right)
    }

    /// Distance between the middles of two up-bonded machines at rest.
    pub fn up_pitch(&self) -> f64 {
        2.0 * self.arm_length(ArmKind::Up)
    }

    /// Arm vector in the world frame for the given heading.
    pub fn arm_vector(&self, heading: f64, arm: ArmKind) -> Vec2 {
        (arm.canonical_direction() * self.arm_length(arm)).rotate(heading)
    }
}

/// Serialised form of [`MachineBody`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyLengths {
    pub side: f64,
    pub up: f64,
    pub repellor: f64,
    pub overlap_detector: f64,
}

impl TryFrom<BodyLengths> for MachineBody {
    type Error = BodyError;

    fn try_from(b: BodyLengths) -> Result<Self, Self::Error> {
        MachineBody::new(b.side, b.up, b.repellor, b.overlap_detector)
    }
}

impl From<MachineBody> for BodyLengths {
    fn from(b: MachineBody) -> Self {
        BodyLengths {
            side: b.arm_length(ArmKind::Left),
            up: b.arm_length(ArmKind::Up),
            repellor: b.arm_length(ArmKind::Repellor),
            overlap_detector: b.arm_length(ArmKind::OverlapDetector),
        }
    }
}

impl Default for MachineBody {
    fn default() -> Self {
        MachineBody { lengths: [1.0, 1.0, 0.6, 0.35, 0.35] }
    }
}

/// Position of the middle and orientation of a machine.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Radians, counter-clockwise, kept in `[0, 2π)`.
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Pose { x, y, heading: wrap_heading(heading) }
    }

    pub fn middle(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.heading.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Kinematics {
    pub vx: f64,
    pub vy: f64,
    pub omega: f64,
}

impl Kinematics {
    pub fn velocity(&self) -> Vec2 {
        Vec2::new(self.vx, self.vy)
    }

    pub fn is_finite(&self) -> bool {
        self.vx.is_finite() && self.vy.is_finite() && self.omega.is_finite()
    }
}

/// Which pair of arms a two-machine bond joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BondKind {
    /// First machine's Right arm to the second machine's Left arm.
    Sideways,
    /// Up arm to Up arm.
    Up,
}

impl BondKind {
    /// Arms used by (first, second) machine.
    pub fn arms(self) -> (ArmKind, ArmKind) {
        match self {
            BondKind::Sideways => (ArmKind::Right, ArmKind::Left),
            BondKind::Up => (ArmKind::Up, ArmKind::Up),
        }
    }
}

pub fn arm_tip(pose: &Pose, body: &MachineBody, arm: ArmKind) -> Vec2 {
    pose.middle() + body.arm_vector(pose.heading, arm)
}

/// Map any angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut a = theta.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// Map any angle into `[0, 2π)`.
pub fn wrap_heading(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Signed angle of `b` relative to `a` for a bond of the given kind.
///
/// Sideways bonds are straight at 0. Up-bonded machines face opposite ways
/// at rest, so the up angle subtracts π and is also 0 at rest.
pub fn relative_bond_angle(a: &Pose, b: &Pose, kind: BondKind) -> f64 {
    match kind {
        BondKind::Sideways => normalize_angle(b.heading - a.heading),
        BondKind::Up => normalize_angle(b.heading - a.heading - PI),
    }
}
