//! Structured records of discrete happenings in a run.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rulebook::MachineId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventKind {
    BondFormed,
    BondBroken,
    Split,
    FoldStart,
    UnfoldStart,
    Shatter,
    SeedPheneCreated,
    MeshJoin,
    Diagnostic,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::BondFormed => "BondFormed",
            EventKind::BondBroken => "BondBroken",
            EventKind::Split => "Split",
            EventKind::FoldStart => "FoldStart",
            EventKind::UnfoldStart => "UnfoldStart",
            EventKind::Shatter => "Shatter",
            EventKind::SeedPheneCreated => "SeedPheneCreated",
            EventKind::MeshJoin => "MeshJoin",
            EventKind::Diagnostic => "Diagnostic",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub step: u64,
    pub kind: EventKind,
    pub subjects: Vec<MachineId>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, String>,
}

impl Event {
    pub fn new(step: u64, kind: EventKind, subjects: Vec<MachineId>) -> Self {
        Event { step, kind, subjects, detail: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.detail.insert(key.to_string(), value.to_string());
        self
    }

    /// Ordering used within a step: kind first, then subject ids.
    pub fn sort_key(&self) -> (EventKind, &[MachineId], &BTreeMap<String, String>) {
        (self.kind, &self.subjects, &self.detail)
    }
}

pub fn sort_events(events: &mut [Event]) {
    events.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}
