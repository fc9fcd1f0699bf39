//! Machine state, bonding tables, and the local state-transition rules.

mod automaton;
mod state;
mod tables;

pub use automaton::{
    bond_in_tolerance, candidate_links, derive, desired_relative_angle, desired_sideways_angle, in_tolerance,
    capture_distance, link_separation, step_automaton, up_bond_eligible, Action, AutomatonOutput, DropReason, IntegrityError, Link,
    LinkKind, Neighbourhood, RuleParams, StateLookup, FOLD_TURN_SIGN,
};
pub use state::{
    partner_arm, BondSet, DerivedState, InternalState, MachineId, MachineState, SplitState, StrandPosition,
};
pub use tables::{
    bend_location, bend_location_bond_allowed, fold_angle, gene_up_bond_allowed, mirror_of_template,
    phene_up_bond_allowed, BendLocation, FoldAngle,
};
