//! World random stream and thermal kicks.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::PhysicsParams;

/// xorshift64* generator. The whole generator state is one `u64`, which
/// makes checkpoints trivial and output identical on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    /// Any seed is accepted; it is scrambled with splitmix64 so that small or
    /// zero seeds still give a well-mixed, non-zero state.
    pub fn seed_from(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Xorshift64Star { state: if z == 0 { 0x2545_F491_4F6C_DD1D } else { z } }
    }

    /// Restore a raw state, as stored in a checkpoint. Zero is rejected.
    pub fn from_state(state: u64) -> Option<Self> {
        (state != 0).then_some(Xorshift64Star { state })
    }

    pub fn state(&self) -> u64 {
        self.state
    }
}

impl RngCore for Xorshift64Star {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

/// Velocity perturbation `(dvx, dvy, domega)`.
///
/// Always draws three normals so the stream position does not depend on
/// whether noise is switched on.
pub fn brownian_kick(rng: &mut Xorshift64Star, params: &PhysicsParams) -> (f64, f64, f64) {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    let c: f64 = StandardNormal.sample(rng);
    (
        a * params.brownian_linear_sigma,
        b * params.brownian_linear_sigma,
        c * params.brownian_angular_sigma,
    )
}
