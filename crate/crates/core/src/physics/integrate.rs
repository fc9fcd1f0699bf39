use crate::geometry::{wrap_heading, Kinematics, Pose, Vec2};

use super::{ForceAccumulator, PhysicsParams};

/// Semi-implicit Euler with multiplicative drag, speed clamps and a
/// slippery container wall.
pub fn integrate(pose: &Pose, kin: &Kinematics, acc: &ForceAccumulator, params: &PhysicsParams) -> (Pose, Kinematics) {
    let dt = params.dt;
    let lin_keep = 1.0 - params.linear_drag;
    let mut v = (kin.velocity() + acc.force() * (dt / params.mass)) * lin_keep;
    let speed = v.norm();
    if speed > params.speed_clamp {
        v = v * (params.speed_clamp / speed);
    }
    let mut omega = (kin.omega + dt * acc.torque / params.inertia) * (1.0 - params.angular_drag);
    omega = omega.clamp(-params.angular_speed_clamp, params.angular_speed_clamp);

    let mut pos = pose.middle() + v * dt;
    clamp_axis(&mut pos.x, &mut v.x, params.container_width);
    clamp_axis(&mut pos.y, &mut v.y, params.container_height);

    let pose = Pose { x: pos.x, y: pos.y, heading: wrap_heading(pose.heading + dt * omega) };
    (pose, Kinematics { vx: v.x, vy: v.y, omega })
}

fn clamp_axis(pos: &mut f64, vel: &mut f64, extent: f64) {
    if *pos < 0.0 {
        *pos = 0.0;
        *vel = vel.max(0.0);
    } else if *pos > extent {
        *pos = extent;
        *vel = vel.min(0.0);
    }
}

pub fn kinetic_energy(kin: &Kinematics, params: &PhysicsParams) -> f64 {
    0.5 * params.mass * Vec2::new(kin.vx, kin.vy).norm_sq() + 0.5 * params.inertia * kin.omega * kin.omega
}
