//! Random streams.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`), whose output is fixed
//! for a given seed across platforms and releases. Defense verification draws
//! from a fresh stream per `(epoch, attack index)` so that re-verifying a
//! subset of attacks replays exactly the draws a full pass would make.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SolverRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Main control stream of a seeded run.
pub fn run_rng(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Source of per-attack streams for defense verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyStream {
    key: u64,
}

impl VerifyStream {
    pub fn new(seed: u64) -> Self {
        VerifyStream {
            key: splitmix64(seed ^ 0x5EED_0F_A77AC4),
        }
    }

    pub fn attack_rng(&self, epoch: u64, attack_index: usize) -> SolverRng {
        let x = splitmix64(self.key ^ epoch);
        let x = splitmix64(x ^ attack_index as u64);
        ChaCha8Rng::seed_from_u64(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let v = VerifyStream::new(7);
        let a = v.attack_rng(3, 11).next_u64();
        assert_eq!(a, VerifyStream::new(7).attack_rng(3, 11).next_u64());
        assert_ne!(a, v.attack_rng(4, 11).next_u64());
        assert_ne!(a, v.attack_rng(3, 12).next_u64());
        assert_ne!(a, VerifyStream::new(8).attack_rng(3, 11).next_u64());
    }
}
