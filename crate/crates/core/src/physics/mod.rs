//! Virtual physics: bond and field forces, Brownian kicks, damped
//! integration inside the container, and neighbour indexing.

mod brownian;
mod forces;
mod index;
mod integrate;
mod params;

pub use brownian::{brownian_kick, Xorshift64Star};
pub use forces::{bond_forces, repellor_force, tip_spring, twist, ForceAccumulator, PairForce};
pub use index::{neighbours_within, AnyIndex, BruteForceIndex, GridIndex, IndexMode, SpatialIndex};
pub use integrate::{integrate, kinetic_energy};
pub use params::{ParamError, PhysicsParams};
