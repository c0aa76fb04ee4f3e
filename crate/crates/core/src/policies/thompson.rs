use rand_distr::{Beta, Distribution};

use super::stats::{argmax, BetaStats};
use super::Policy;
use crate::collision::Observation;
use crate::rng::SimRng;

/// Samples `θ_i ~ Beta(S_i + 1, F_i + 1)` in ascending arm order and returns
/// the argmax.
pub fn thompson_select(stats: &BetaStats, rng: &mut SimRng) -> usize {
    argmax((0..stats.n_arms()).map(|i| {
        let a = stats.successes(i) as f64 + 1.0;
        let b = stats.failures(i) as f64 + 1.0;
        // Both shape parameters are at least 1.
        Beta::new(a, b).expect("valid beta shape").sample(rng)
    }))
}

#[derive(Debug, Clone)]
pub struct Thompson {
    stats: BetaStats,
}

impl Thompson {
    pub fn new(n_arms: usize) -> Self {
        Self {
            stats: BetaStats::new(n_arms),
        }
    }
}

impl Policy for Thompson {
    fn select(&mut self, _turn: u64, rng: &mut SimRng) -> usize {
        thompson_select(&self.stats, rng)
    }

    fn ingest(&mut self, observations: &[Observation]) {
        self.stats.ingest(observations);
    }
}
