//! Sampling from the full-communication optimal allocation.
//!
//! Players unaware of the collision model still converge here: collisions
//! scale down the observed means, but the allocation only depends on their
//! ratios.

use rand::Rng;

use super::stats::{ArmStats, ExplorationSchedule};
use super::Policy;
use crate::allocation::{optimal_allocation, MEAN_FLOOR};
use crate::collision::Observation;
use crate::rng::SimRng;

/// The distribution the exploitation branch samples from: the optimal
/// allocation for the observed means, floored at [`MEAN_FLOOR`].
pub fn exploitation_distribution(stats: &ArmStats, n_players: usize) -> Vec<f64> {
    let floored: Vec<f64> = stats
        .means_or_zero()
        .into_iter()
        .map(|m| m.max(MEAN_FLOOR))
        .collect();
    optimal_allocation(&floored, n_players.max(1))
        .expect("floored means are positive")
        .probabilities
}

/// With probability ε a uniform arm; otherwise an inverse-CDF draw over the
/// exploitation distribution in ascending arm order.
pub fn asymp_opt_select(
    stats: &ArmStats,
    schedule: &ExplorationSchedule,
    n_players: usize,
    rng: &mut SimRng,
) -> usize {
    if rng.random::<f64>() < schedule.epsilon() {
        return rng.random_range(0..stats.n_arms());
    }
    let probabilities = exploitation_distribution(stats, n_players);
    let u = rng.random::<f64>();
    let mut cumulative = 0.0;
    let mut last_active = 0;
    for (arm, &c) in probabilities.iter().enumerate() {
        if c <= 0.0 {
            continue;
        }
        cumulative += c;
        last_active = arm;
        if cumulative > u {
            return arm;
        }
    }
    // Rounding left the total a hair under u.
    last_active
}

#[derive(Debug, Clone)]
pub struct AsymptoticallyOptimal {
    stats: ArmStats,
    schedule: ExplorationSchedule,
    n_players: usize,
}

impl AsymptoticallyOptimal {
    pub fn new(n_arms: usize, n_players: usize, schedule: ExplorationSchedule) -> Self {
        Self {
            stats: ArmStats::new(n_arms),
            schedule,
            n_players,
        }
    }
}

impl Policy for AsymptoticallyOptimal {
    fn select(&mut self, _turn: u64, rng: &mut SimRng) -> usize {
        asymp_opt_select(&self.stats, &self.schedule, self.n_players, rng)
    }

    fn ingest(&mut self, observations: &[Observation]) {
        self.stats.ingest(observations);
    }

    fn end_turn(&mut self) {
        self.schedule.decay();
    }
}
