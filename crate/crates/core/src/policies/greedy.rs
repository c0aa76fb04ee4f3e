use rand::Rng;

use super::stats::{argmax, ArmStats, ExplorationSchedule};
use super::Policy;
use crate::collision::Observation;
use crate::rng::SimRng;

/// With probability ε a uniform arm, otherwise the best observed mean
/// (unobserved arms count as zero).
pub fn eps_greedy_select(stats: &ArmStats, schedule: &ExplorationSchedule, rng: &mut SimRng) -> usize {
    if rng.random::<f64>() < schedule.epsilon() {
        rng.random_range(0..stats.n_arms())
    } else {
        argmax(stats.means_or_zero())
    }
}

#[derive(Debug, Clone)]
pub struct EpsilonGreedy {
    stats: ArmStats,
    schedule: ExplorationSchedule,
}

impl EpsilonGreedy {
    pub fn new(n_arms: usize, schedule: ExplorationSchedule) -> Self {
        Self {
            stats: ArmStats::new(n_arms),
            schedule,
        }
    }

    pub fn schedule(&self) -> &ExplorationSchedule {
        &self.schedule
    }
}

impl Policy for EpsilonGreedy {
    fn select(&mut self, _turn: u64, rng: &mut SimRng) -> usize {
        eps_greedy_select(&self.stats, &self.schedule, rng)
    }

    fn ingest(&mut self, observations: &[Observation]) {
        self.stats.ingest(observations);
    }

    fn end_turn(&mut self) {
        self.schedule.decay();
    }
}
