//! SVG frames of a world.
//!
//! World y points up, so the frame is flipped vertically. Element order
//! follows machine ids and number formatting is fixed, which makes the output
//! a pure function of the snapshot.
//!
//! Legend: grey free machine, blue gene, orange folded phene, green phene in
//! the mesh, red shattering. Repellor arms are only drawn while active.

use std::fmt::Write;

use crate::engine::World;
use crate::geometry::{arm_tip, ArmKind, Vec2};
use crate::params::SimParams;
use crate::rulebook::MachineState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Pixels per world unit.
    pub scale: f64,
    pub draw_bonds: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { scale: 20.0, draw_bonds: true }
    }
}

fn colour(m: &MachineState) -> &'static str {
    let s = &m.internal;
    if s.shatter {
        "#d62728"
    } else if s.in_mesh {
        "#2ca02c"
    } else if s.folded {
        "#ff7f0e"
    } else if m.is_free() {
        "#7f7f7f"
    } else {
        "#1f77b4"
    }
}

pub fn render_svg(world: &World) -> String {
    render_machines(world.machines(), world.params(), world.step_number(), &RenderOptions::default())
}

pub fn render_machines(machines: &[MachineState], sim: &SimParams, step: u64, opts: &RenderOptions) -> String {
    let (w, h) = (sim.physics.container_width, sim.physics.container_height);
    let k = opts.scale;
    let px = |p: Vec2| (p.x * k, (h - p.y) * k);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        w * k,
        h * k,
        w * k,
        h * k
    );
    let _ = writeln!(out, "<title>step {step}</title>");
    let _ = writeln!(
        out,
        r##"<rect class="container" x="0" y="0" width="{:.0}" height="{:.0}" fill="#f4f4f4" stroke="#a0a0a0" stroke-width="2"/>"##,
        w * k,
        h * k
    );

    for m in machines {
        let (x0, y0) = px(m.pose.middle());
        let c = colour(m);
        let _ = writeln!(out, r#"<g class="machine" id="m{}" stroke="{c}" stroke-linecap="round">"#, m.id().0);
        let arms: &[ArmKind] = if m.internal.repel_counter > 0 {
            &[ArmKind::Left, ArmKind::Right, ArmKind::Up, ArmKind::Repellor, ArmKind::OverlapDetector]
        } else {
            &[ArmKind::Left, ArmKind::Right, ArmKind::Up, ArmKind::OverlapDetector]
        };
        for &arm in arms {
            let (x1, y1) = px(arm_tip(&m.pose, &sim.body, arm));
            let extra = if arm == ArmKind::Repellor { r##" stroke="#d62728""## } else { "" };
            let _ = writeln!(
                out,
                r#"<line class="arm {}" x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke-width="{:.2}"{extra}/>"#,
                arm.name(),
                0.12 * k
            );
        }
        let _ = writeln!(out, "</g>");
    }

    if opts.draw_bonds {
        for m in machines {
            let bonds = [
                (m.bonds.right, ArmKind::Right, ArmKind::Left),
                (m.bonds.up.filter(|u| *u > m.id()), ArmKind::Up, ArmKind::Up),
            ];
            for (other, arm, other_arm) in bonds {
                let Some(o) = other.and_then(|o| machines.get(o.index())) else { continue };
                let (x1, y1) = px(arm_tip(&m.pose, &sim.body, arm));
                let (x2, y2) = px(arm_tip(&o.pose, &sim.body, other_arm));
                let _ = writeln!(
                    out,
                    r##"<line class="bond" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#000000" stroke-width="{:.2}"/>"##,
                    0.05 * k
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
