//! Hand-placed strands for scripted runs and tests.

use crate::geometry::{ArmKind, MachineBody, MachineType, Pose, Vec2};
use crate::rulebook::{MachineId, MachineState, StrandPosition, FOLD_TURN_SIGN};
use crate::seedlab::{predict_fold, SeedSpec, UndefinedFold};

fn bond_chain(machines: &mut [MachineState], closed: bool) {
    let n = machines.len();
    let ids: Vec<MachineId> = machines.iter().map(MachineState::id).collect();
    for (i, m) in machines.iter_mut().enumerate() {
        if i > 0 || closed {
            m.bonds.left = Some(ids[(i + n - 1) % n]);
        }
        if i + 1 < n || closed {
            m.bonds.right = Some(ids[(i + 1) % n]);
        }
    }
}

/// A straight, sideways-bonded strand with ids `first..`, leftmost machine
/// centred on `start`, pointing along `heading`. Tips touch.
pub fn straight_strand(first: u32, types: &[MachineType], start: Vec2, heading: f64, body: &MachineBody) -> Vec<MachineState> {
    let step = Vec2::from_angle(heading) * body.sideways_pitch();
    let mut machines: Vec<MachineState> = types
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let p = start + step * i as f64;
            MachineState::new(MachineId(first + i as u32), t, Pose::new(p.x, p.y, heading))
        })
        .collect();
    bond_chain(&mut machines, false);
    let n = machines.len();
    for (i, m) in machines.iter_mut().enumerate() {
        m.internal.strand_position = StrandPosition::from_bonds(i > 0, i + 1 < n);
    }
    machines
}

/// `spec` already folded into its polygon around `centre`, flagged folded
/// and replicated, every bond at its rest angle. Machine `first` keeps the
/// leftmost position it had before the loop closed.
pub fn folded_loop(first: u32, spec: &SeedSpec, centre: Vec2, body: &MachineBody) -> Result<Vec<MachineState>, UndefinedFold> {
    let plan = predict_fold(spec)?;
    let n = spec.len();
    let mut headings = Vec::with_capacity(n);
    let mut h = 0.0_f64;
    for &turn in &plan.turn_angles {
        headings.push(h);
        h += FOLD_TURN_SIGN * f64::from(turn).to_radians();
    }
    let mut middles = vec![Vec2::ZERO; n];
    for i in 1..n {
        middles[i] = middles[i - 1] + Vec2::from_angle(headings[i - 1]) * body.arm_length(ArmKind::Right)
            + Vec2::from_angle(headings[i]) * body.arm_length(ArmKind::Left);
    }
    let centroid = middles.iter().fold(Vec2::ZERO, |a, &b| a + b) * (1.0 / n as f64);
    let mut machines: Vec<MachineState> = spec
        .types()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let p = middles[i] - centroid + centre;
            let mut m = MachineState::new(MachineId(first + i as u32), t, Pose::new(p.x, p.y, headings[i]));
            m.internal.folded = true;
            m.internal.replicated = true;
            m.internal.strand_position = match i {
                0 => StrandPosition::Leftmost,
                i if i + 1 == n => StrandPosition::Rightmost,
                _ => StrandPosition::Interior,
            };
            m
        })
        .collect();
    bond_chain(&mut machines, true);
    Ok(machines)
}
