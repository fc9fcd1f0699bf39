//! Neighbour queries over machine middles.
//!
//! [`GridIndex`] buckets middles into square cells with a counting sort, so
//! a build is O(n) and a query only touches the cells its disc overlaps.
//! [`BruteForceIndex`] scans everything and exists as the reference the grid
//! is checked against.

use serde::{Deserialize, Serialize};

use crate::geometry::{MachineBody, Vec2};
use crate::rulebook::MachineId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMode {
    #[default]
    Grid,
    BruteForce,
}

pub trait SpatialIndex {
    /// Appends, in ascending id order, every machine whose middle lies
    /// within `radius` of `point` (inclusive).
    fn within(&self, point: Vec2, radius: f64, out: &mut Vec<MachineId>);
}

#[derive(Debug, Clone, Default)]
pub struct BruteForceIndex {
    points: Vec<Vec2>,
}

impl BruteForceIndex {
    pub fn build(points: &[Vec2]) -> Self {
        BruteForceIndex { points: points.to_vec() }
    }
}

impl SpatialIndex for BruteForceIndex {
    fn within(&self, point: Vec2, radius: f64, out: &mut Vec<MachineId>) {
        let r2 = radius * radius;
        for (i, p) in self.points.iter().enumerate() {
            if (*p - point).norm_sq() <= r2 {
                out.push(MachineId(i as u32));
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GridIndex {
    cell: f64,
    cols: usize,
    rows: usize,
    /// `starts[c]..starts[c + 1]` indexes `ids` for cell `c`.
    starts: Vec<u32>,
    ids: Vec<u32>,
    points: Vec<Vec2>,
}

impl GridIndex {
    /// Middles outside `[0, width] × [0, height]` are clamped into the edge cells.
    pub fn build(points: &[Vec2], width: f64, height: f64, cell: f64) -> Self {
        assert!(cell > 0.0, "grid cell size must be positive");
        let cols = ((width / cell).ceil() as usize).max(1);
        let rows = ((height / cell).ceil() as usize).max(1);
        let mut grid = GridIndex { cell, cols, rows, starts: vec![0; cols * rows + 1], ids: vec![0; points.len()], points: points.to_vec() };
        let cells: Vec<usize> = points.iter().map(|p| grid.cell_of(*p)).collect();
        for &c in &cells {
            grid.starts[c + 1] += 1;
        }
        for c in 0..cols * rows {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        // ids within a cell end up ascending because we insert in id order
        for (i, &c) in cells.iter().enumerate() {
            grid.ids[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    fn col_row(&self, p: Vec2) -> (usize, usize) {
        let clamp = |v: f64, n: usize| -> usize {
            if v.is_nan() || v < 0.0 {
                0
            } else {
                ((v / self.cell) as usize).min(n - 1)
            }
        };
        (clamp(p.x, self.cols), clamp(p.y, self.rows))
    }

    fn cell_of(&self, p: Vec2) -> usize {
        let (c, r) = self.col_row(p);
        r * self.cols + c
    }
}

impl SpatialIndex for GridIndex {
    fn within(&self, point: Vec2, radius: f64, out: &mut Vec<MachineId>) {
        let r2 = radius * radius;
        let (c0, r0) = self.col_row(point - Vec2::new(radius, radius));
        let (c1, r1) = self.col_row(point + Vec2::new(radius, radius));
        let start = out.len();
        for row in r0..=r1 {
            // cells of one row are contiguous in `ids`
            let first = self.starts[row * self.cols + c0] as usize;
            let last = self.starts[row * self.cols + c1 + 1] as usize;
            for &id in &self.ids[first..last] {
                if (self.points[id as usize] - point).norm_sq() <= r2 {
                    out.push(MachineId(id));
                }
            }
        }
        out[start..].sort_unstable();
    }
}

/// Either index behind one type, chosen per world.
#[derive(Debug, Clone)]
pub enum AnyIndex {
    Grid(GridIndex),
    BruteForce(BruteForceIndex),
}

impl AnyIndex {
    pub fn build(mode: IndexMode, points: &[Vec2], width: f64, height: f64, cell: f64) -> Self {
        match mode {
            IndexMode::Grid => AnyIndex::Grid(GridIndex::build(points, width, height, cell)),
            IndexMode::BruteForce => AnyIndex::BruteForce(BruteForceIndex::build(points)),
        }
    }
}

impl SpatialIndex for AnyIndex {
    fn within(&self, point: Vec2, radius: f64, out: &mut Vec<MachineId>) {
        match self {
            AnyIndex::Grid(g) => g.within(point, radius, out),
            AnyIndex::BruteForce(b) => b.within(point, radius, out),
        }
    }
}

/// Candidate machines whose fields could reach a disc of `radius` around
/// `point`: every middle within `radius + longest arm + field radius`.
/// A superset filter; exact tip tests happen downstream.
pub fn neighbours_within(index: &impl SpatialIndex, point: Vec2, radius: f64, body: &MachineBody, field_radius: f64) -> Vec<MachineId> {
    let mut out = Vec::new();
    index.within(point, radius + body.max_arm_length() + field_radius, &mut out);
    out
}
