//! Bernoulli arms and their per-turn reward realizations.

use rand::Rng;

use crate::error::{param, Result};
use crate::rng::SimRng;

/// Ground-truth Bernoulli means, one per arm. Hidden from policies.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSet {
    means: Vec<f64>,
}

impl ArmSet {
    pub fn new(means: Vec<f64>) -> Result<Self> {
        if means.is_empty() {
            return param("an arm set needs at least one arm");
        }
        if let Some((i, m)) = means
            .iter()
            .enumerate()
            .find(|(_, m)| !(0.0..=1.0).contains(*m))
        {
            return param(format!("mean of arm {} is {m}, outside [0, 1]", i + 1));
        }
        Ok(Self { means })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Arm indices sorted by mean, best first; ties keep the lower index first.
    pub fn descending_order(&self) -> Vec<usize> {
        descending_order(&self.means)
    }
}

/// Indices of `values` sorted descending, ties broken by lower index.
pub fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

/// The reward realization of every arm for one turn, pulled or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnDraw {
    pub rewards: Vec<u8>,
}

/// Draws one Bernoulli reward per arm, in ascending arm order.
pub fn draw_rewards(arms: &ArmSet, rng: &mut SimRng) -> TurnDraw {
    let rewards = arms
        .means
        .iter()
        .map(|&mu| u8::from(rng.random::<f64>() < mu))
        .collect();
    TurnDraw { rewards }
}

/// Named mean vectors used throughout the experiments.
pub mod presets {
    /// Ten arms, evenly spaced from 0.9 down to 0.1 plus a near-dead arm.
    pub const MU1: [f64; 10] = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.01];
    /// Ten arms in two tight clusters.
    pub const MU2: [f64; 10] = [0.7, 0.68, 0.66, 0.64, 0.62, 0.4, 0.38, 0.36, 0.34, 0.32];

    pub fn by_name(name: &str) -> Option<&'static [f64]> {
        match name {
            "mu1" => Some(&MU1),
            "mu2" => Some(&MU2),
            _ => None,
        }
    }
}
