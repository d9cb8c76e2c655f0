//! Counter-based random streams: every (master seed, index, role) triple
//! names an independent ChaCha stream, so trial `i` sees the same numbers
//! regardless of how many trials run or how they are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Consumer of a stream within one trial or participant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamRole {
    /// Forced-exploration order, explore coins and arm draws.
    Strategy = 0,
    /// Profile fabrication.
    Environment = 1,
    /// The simulated player's own behavior.
    Player = 2,
}

const ROLES: u64 = 4;

pub fn stream(master_seed: u64, index: u64, role: StreamRole) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index.wrapping_mul(ROLES).wrapping_add(role as u64));
    rng
}

/// Plain seeded stream for one-off uses.
pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The three streams of one trial.
pub struct TrialStreams {
    pub strategy: SimRng,
    pub environment: SimRng,
    pub player: SimRng,
}

impl TrialStreams {
    pub fn new(master_seed: u64, index: u64) -> Self {
        Self {
            strategy: stream(master_seed, index, StreamRole::Strategy),
            environment: stream(master_seed, index, StreamRole::Environment),
            player: stream(master_seed, index, StreamRole::Player),
        }
    }
}
