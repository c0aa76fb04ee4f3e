//! Per-player learning state fed by self and neighbor observations.

use crate::collision::Observation;
use crate::error::{param, Result};

/// Pooled pull counts and reward sums per arm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArmStats {
    counts: Vec<u64>,
    sums: Vec<u64>,
    total: u64,
}

impl ArmStats {
    pub fn new(n_arms: usize) -> Self {
        Self {
            counts: vec![0; n_arms],
            sums: vec![0; n_arms],
            total: 0,
        }
    }

    /// Builds stats from explicit per-arm counts and reward sums.
    pub fn from_counts(counts: Vec<u64>, sums: Vec<u64>) -> Result<Self> {
        if counts.len() != sums.len() {
            return param("counts and sums differ in length");
        }
        if counts.iter().zip(&sums).any(|(n, s)| s > n) {
            return param("an arm has more successes than observations");
        }
        let total = counts.iter().sum();
        Ok(Self { counts, sums, total })
    }

    pub fn n_arms(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Observed mean, if the arm has been observed at all.
    pub fn mean(&self, arm: usize) -> Option<f64> {
        (self.counts[arm] > 0).then(|| self.sums[arm] as f64 / self.counts[arm] as f64)
    }

    /// Observed means with unobserved arms at zero.
    pub fn means_or_zero(&self) -> Vec<f64> {
        (0..self.n_arms()).map(|i| self.mean(i).unwrap_or(0.0)).collect()
    }

    pub fn ingest(&mut self, observations: &[Observation]) {
        for o in observations {
            self.counts[o.arm] += 1;
            self.sums[o.arm] += u64::from(o.reward);
            self.total += 1;
        }
    }
}

/// Beta posterior counters for Thompson sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaStats {
    successes: Vec<u64>,
    failures: Vec<u64>,
}

impl BetaStats {
    pub fn new(n_arms: usize) -> Self {
        Self {
            successes: vec![0; n_arms],
            failures: vec![0; n_arms],
        }
    }

    pub fn from_counts(successes: Vec<u64>, failures: Vec<u64>) -> Result<Self> {
        if successes.len() != failures.len() {
            return param("success and failure counters differ in length");
        }
        Ok(Self { successes, failures })
    }

    pub fn n_arms(&self) -> usize {
        self.successes.len()
    }

    pub fn successes(&self, arm: usize) -> u64 {
        self.successes[arm]
    }

    pub fn failures(&self, arm: usize) -> u64 {
        self.failures[arm]
    }

    pub fn ingest(&mut self, observations: &[Observation]) {
        for o in observations {
            if o.reward == 1 {
                self.successes[o.arm] += 1;
            } else {
                self.failures[o.arm] += 1;
            }
        }
    }
}

/// Geometric ε decay: after `t` turns, ε equals `initial · decay^t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationSchedule {
    epsilon: f64,
    decay: f64,
}

impl ExplorationSchedule {
    pub const DEFAULT_DECAY: f64 = 0.999;

    pub fn new(initial: f64, decay: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&initial) {
            return param(format!("initial epsilon {initial} is outside [0, 1]"));
        }
        if !(decay > 0.0 && decay < 1.0) {
            return param(format!("epsilon decay {decay} is outside (0, 1)"));
        }
        Ok(Self {
            epsilon: initial,
            decay,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay
    }

    pub fn decay(&mut self) {
        self.epsilon *= self.decay;
    }
}

impl Default for ExplorationSchedule {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            decay: Self::DEFAULT_DECAY,
        }
    }
}

/// Index of the first maximum.
pub(crate) fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}
