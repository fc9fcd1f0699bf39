use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ArmKind, MachineBody};

/// Tuned physical constants of the simulated liquid and fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    pub dt: f64,
    /// Radius of the attractive field circle at each arm tip.
    pub field_radius: f64,
    pub spring_k: f64,
    pub twist_k: f64,
    pub repel_k: f64,
    /// Range of the repellor field.
    pub repel_radius: f64,
    pub brownian_linear_sigma: f64,
    pub brownian_angular_sigma: f64,
    pub linear_drag: f64,
    pub angular_drag: f64,
    pub mass: f64,
    pub inertia: f64,
    pub speed_clamp: f64,
    pub angular_speed_clamp: f64,
    pub container_width: f64,
    pub container_height: f64,
    /// A bond whose tips drift further apart than this snaps.
    pub bond_break_distance: f64,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        PhysicsParams {
            dt: 0.2,
            field_radius: 0.25,
            spring_k: 4.0,
            twist_k: 1.5,
            repel_k: 8.0,
            repel_radius: 1.0,
            brownian_linear_sigma: 0.04,
            brownian_angular_sigma: 0.02,
            linear_drag: 0.08,
            angular_drag: 0.08,
            mass: 1.0,
            inertia: 0.5,
            speed_clamp: 0.5,
            angular_speed_clamp: 0.5,
            container_width: 40.0,
            container_height: 40.0,
            bond_break_distance: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("physics parameter `{0}` must be finite and strictly positive")]
    NotPositive(&'static str),
    #[error("physics parameter `{0}` must be finite and non-negative")]
    Negative(&'static str),
    #[error("drag `{0}` must lie in [0, 1)")]
    Drag(&'static str),
    #[error("field radius {field} must be shorter than the up arm {up}")]
    FieldTooLarge { field: f64, up: f64 },
}

impl PhysicsParams {
    pub fn validate(&self, body: &MachineBody) -> Result<(), ParamError> {
        let positive = [
            ("dt", self.dt),
            ("field_radius", self.field_radius),
            ("spring_k", self.spring_k),
            ("twist_k", self.twist_k),
            ("repel_k", self.repel_k),
            ("repel_radius", self.repel_radius),
            ("mass", self.mass),
            ("inertia", self.inertia),
            ("speed_clamp", self.speed_clamp),
            ("angular_speed_clamp", self.angular_speed_clamp),
            ("container_width", self.container_width),
            ("container_height", self.container_height),
            ("bond_break_distance", self.bond_break_distance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ParamError::NotPositive(name));
            }
        }
        // zero noise is how the deterministic scenarios switch Brownian motion off
        for (name, v) in [
            ("brownian_linear_sigma", self.brownian_linear_sigma),
            ("brownian_angular_sigma", self.brownian_angular_sigma),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ParamError::Negative(name));
            }
        }
        for (name, v) in [("linear_drag", self.linear_drag), ("angular_drag", self.angular_drag)] {
            if !(v.is_finite() && (0.0..1.0).contains(&v)) {
                return Err(ParamError::Drag(name));
            }
        }
        let up = body.arm_length(ArmKind::Up);
        if self.field_radius >= up {
            return Err(ParamError::FieldTooLarge { field: self.field_radius, up });
        }
        Ok(())
    }

    /// Largest middle-to-middle distance at which two machines can interact.
    pub fn interaction_range(&self, body: &MachineBody) -> f64 {
        let tips = 2.0 * body.max_arm_length() + 2.0 * self.field_radius;
        let repel = 2.0 * body.arm_length(ArmKind::Repellor) + self.repel_radius;
        tips.max(repel)
    }

    pub fn drag_only(mut self) -> Self {
        self.brownian_linear_sigma = 0.0;
        self.brownian_angular_sigma = 0.0;
        self
    }
}
