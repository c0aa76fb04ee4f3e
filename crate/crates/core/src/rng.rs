//! Random streams.
//!
//! Every replication owns one ChaCha stream, keyed by the experiment's base
//! seed and selected by the replication index. Streams for distinct indices
//! never overlap, so replications can run in any order or concurrently and
//! still reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream type threaded through every stochastic operation.
pub type SimRng = ChaCha8Rng;

/// Stream for replication `replication` of an experiment seeded with `base_seed`.
pub fn replication_stream(base_seed: u64, replication: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(replication);
    rng
}

/// Convenience for tests and one-off draws.
pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
