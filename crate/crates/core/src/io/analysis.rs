//! Reconstructs strands and meshes from bonds after the fact. The
//! simulation itself never builds these; they exist only for analysis.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::events::{Event, EventKind};
use crate::rulebook::{MachineId, MachineState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrandClass {
    Free,
    Gene,
    Phene,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strand {
    /// Left to right; loops start at their smallest id.
    pub ids: Vec<MachineId>,
    pub class: StrandClass,
    pub closed: bool,
    /// Index of the mesh component, for phenes.
    pub mesh: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("machine {0} is reachable from a loop but not part of it")]
    Branch(MachineId),
    #[error("machine {a} points sideways at {b}, which does not point back")]
    Asymmetric { a: MachineId, b: MachineId },
}

/// Maximal sideways chains, ordered by their first id. Singletons without
/// any bond are free machines; a machine with only an up bond forms a
/// one-machine gene.
pub fn derive_strands(machines: &[MachineState]) -> Result<Vec<Strand>, TopologyError> {
    let n = machines.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut strands: Vec<Strand> = Vec::new();
    let right = |id: MachineId| machines[id.index()].bonds.right;
    let left = |id: MachineId| machines[id.index()].bonds.left;

    for m in machines {
        if let Some(r) = m.bonds.right {
            if left(r) != Some(m.id()) {
                return Err(TopologyError::Asymmetric { a: m.id(), b: r });
            }
        }
    }

    for start in machines.iter().map(MachineState::id) {
        if owner[start.index()].is_some() {
            continue;
        }
        // walk left to the chain head, or all the way round a loop
        let mut head = start;
        let mut closed = false;
        let mut steps = 0;
        while let Some(l) = left(head) {
            if l == start {
                closed = true;
                break;
            }
            head = l;
            steps += 1;
            if steps > n {
                return Err(TopologyError::Branch(start));
            }
        }
        let mut ids = vec![head];
        let mut cur = head;
        while let Some(r) = right(cur) {
            if r == head {
                break;
            }
            if ids.len() > n {
                return Err(TopologyError::Branch(r));
            }
            ids.push(r);
            cur = r;
        }
        if closed {
            let k = ids.iter().enumerate().min_by_key(|(_, &v)| v).map_or(0, |(i, _)| i);
            ids.rotate_left(k);
        }
        let index = strands.len();
        for id in &ids {
            if owner[id.index()].replace(index).is_some() {
                return Err(TopologyError::Branch(*id));
            }
        }
        let class = if ids.len() == 1 && machines[ids[0].index()].is_free() {
            StrandClass::Free
        } else if ids.iter().any(|id| machines[id.index()].internal.folded) {
            StrandClass::Phene
        } else {
            StrandClass::Gene
        };
        strands.push(Strand { ids, class, closed, mesh: None });
    }
    strands.sort_by_key(|s| s.ids[0]);
    for (i, s) in strands.iter().enumerate() {
        for id in &s.ids {
            owner[id.index()] = Some(i);
        }
    }

    // mesh components: union phenes joined by up bonds
    let mut parent: Vec<usize> = (0..strands.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, s) in strands.iter().enumerate().filter(|(_, s)| s.class == StrandClass::Phene) {
        for id in &s.ids {
            if let Some(u) = machines[id.index()].bonds.up {
                let j = owner[u.index()].expect("every machine has a strand");
                if strands[j].class == StrandClass::Phene {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut labels = BTreeMap::new();
    for (i, s) in strands.iter_mut().enumerate() {
        if s.class == StrandClass::Phene {
            let root = find(&mut parent, i);
            let next = labels.len();
            s.mesh = Some(*labels.entry(root).or_insert(next));
        }
    }
    Ok(strands)
}

/// Phene count of each mesh component, largest first.
pub fn mesh_sizes(strands: &[Strand]) -> Vec<usize> {
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for s in strands {
        if let Some(m) = s.mesh {
            *sizes.entry(m).or_default() += 1;
        }
    }
    let mut v: Vec<usize> = sizes.into_values().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Counts in the style of an observation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub timestep: u64,
    pub total_machines: usize,
    pub free_machines: usize,
    pub strand_count: usize,
    pub phenes_folded: usize,
    /// Phenes in the component that holds the seed phene's lineage, or
    /// the largest component when there is no mesh flag anywhere.
    pub phenes_in_mesh: usize,
    pub genes_remaining: usize,
    pub largest_mesh_size: usize,
    pub shatters: usize,
    pub unfolds: usize,
}

impl SummaryRecord {
    pub const HEADER: &'static str = "timestep,total,free,strands,phenes_folded,phenes_in_mesh,genes,largest_mesh,shatters,unfolds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.timestep,
            self.total_machines,
            self.free_machines,
            self.strand_count,
            self.phenes_folded,
            self.phenes_in_mesh,
            self.genes_remaining,
            self.largest_mesh_size,
            self.shatters,
            self.unfolds
        )
    }
}

impl fmt::Display for SummaryRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "timestep           {}", self.timestep)?;
        writeln!(f, "machines           {} ({} free)", self.total_machines, self.free_machines)?;
        writeln!(f, "strands            {}", self.strand_count)?;
        writeln!(f, "genes remaining    {}", self.genes_remaining)?;
        writeln!(f, "phenes folded      {}", self.phenes_folded)?;
        writeln!(f, "phenes in mesh     {}", self.phenes_in_mesh)?;
        writeln!(f, "largest mesh       {}", self.largest_mesh_size)?;
        write!(f, "errors             {} shatters, {} unfolds", self.shatters, self.unfolds)
    }
}

/// Counts for one snapshot. `events` is the log so far, used only for the
/// error tallies; pass an empty slice when there is none.
pub fn summarize(step: u64, machines: &[MachineState], events: &[Event]) -> Result<SummaryRecord, TopologyError> {
    let strands = derive_strands(machines)?;
    let count = |c: StrandClass| strands.iter().filter(|s| s.class == c).count();
    let sizes = mesh_sizes(&strands);
    let in_mesh = strands
        .iter()
        .filter(|s| s.class == StrandClass::Phene && s.ids.iter().any(|id| machines[id.index()].internal.in_mesh))
        .count();
    Ok(SummaryRecord {
        timestep: step,
        total_machines: machines.len(),
        free_machines: count(StrandClass::Free),
        strand_count: strands.len() - count(StrandClass::Free),
        phenes_folded: count(StrandClass::Phene),
        phenes_in_mesh: in_mesh,
        genes_remaining: count(StrandClass::Gene),
        largest_mesh_size: sizes.first().copied().unwrap_or(0),
        shatters: events.iter().filter(|e| e.kind == EventKind::Shatter).count(),
        unfolds: events.iter().filter(|e| e.kind == EventKind::UnfoldStart).count(),
    })
}
