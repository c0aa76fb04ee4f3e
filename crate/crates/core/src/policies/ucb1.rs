use super::stats::{argmax, ArmStats};
use super::Policy;
use crate::collision::Observation;
use crate::rng::SimRng;

/// Unobserved arms first (lowest index), then the highest upper confidence
/// bound `μ'_i + sqrt(2 ln n / n_i)`.
pub fn ucb1_select(stats: &ArmStats) -> usize {
    if let Some(unseen) = (0..stats.n_arms()).find(|&i| stats.count(i) == 0) {
        return unseen;
    }
    let log_n = (stats.total() as f64).ln();
    argmax((0..stats.n_arms()).map(|i| {
        let n_i = stats.count(i) as f64;
        stats.mean(i).unwrap_or(0.0) + (2.0 * log_n / n_i).sqrt()
    }))
}

#[derive(Debug, Clone)]
pub struct Ucb1 {
    stats: ArmStats,
}

impl Ucb1 {
    pub fn new(n_arms: usize) -> Self {
        Self {
            stats: ArmStats::new(n_arms),
        }
    }
}

impl Policy for Ucb1 {
    fn select(&mut self, _turn: u64, _rng: &mut SimRng) -> usize {
        ucb1_select(&self.stats)
    }

    fn ingest(&mut self, observations: &[Observation]) {
        self.stats.ingest(observations);
    }
}
