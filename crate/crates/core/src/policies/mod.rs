//! Per-player decision rules.
//!
//! Every policy learns from its own post-collision reward plus whatever its
//! neighbors reported at the end of the turn. Players never share state.

mod asymptotic;
mod cycle;
mod greedy;
mod stats;
mod thompson;
mod ucb1;

use std::fmt;
use std::str::FromStr;

pub use asymptotic::{asymp_opt_select, exploitation_distribution, AsymptoticallyOptimal};
pub use cycle::{optimal_cycle_select, CycleState, OptimalCycle};
pub use greedy::{eps_greedy_select, EpsilonGreedy};
pub use stats::{ArmStats, BetaStats, ExplorationSchedule};
pub use thompson::{thompson_select, Thompson};
pub use ucb1::{ucb1_select, Ucb1};

use crate::collision::Observation;
use crate::error::{param, Error, Result};
use crate::rng::SimRng;

/// A single player's strategy.
pub trait Policy: Send {
    /// Chooses an arm for `turn` (0-based).
    fn select(&mut self, turn: u64, rng: &mut SimRng) -> usize;

    /// Absorbs the observations delivered at the end of a turn: the player's
    /// own first, then its current neighbors' in ascending player order.
    fn ingest(&mut self, observations: &[Observation]);

    /// Called once after every turn.
    fn end_turn(&mut self) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    Ucb1,
    EpsilonGreedy,
    Thompson,
    AsymptoticallyOptimal,
    OptimalCycle,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Ucb1,
        PolicyKind::EpsilonGreedy,
        PolicyKind::Thompson,
        PolicyKind::AsymptoticallyOptimal,
        PolicyKind::OptimalCycle,
    ];

    /// Canonical name, as used in configs and CSV output.
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::EpsilonGreedy => "egreedy",
            PolicyKind::Thompson => "thompson",
            PolicyKind::AsymptoticallyOptimal => "asymp_opt",
            PolicyKind::OptimalCycle => "optimal_cycle",
        }
    }

    /// Whether the policy needs `players <= arms`.
    pub fn needs_top_n(self) -> bool {
        self == PolicyKind::OptimalCycle
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "ucb1" | "ucb" => Ok(PolicyKind::Ucb1),
            "egreedy" | "epsilon_greedy" | "eps_greedy" => Ok(PolicyKind::EpsilonGreedy),
            "thompson" | "ts" => Ok(PolicyKind::Thompson),
            "asymp_opt" | "asymptotically_optimal" => Ok(PolicyKind::AsymptoticallyOptimal),
            "optimal_cycle" | "cycle" => Ok(PolicyKind::OptimalCycle),
            other => param(format!("unknown policy '{other}'")),
        }
    }
}

/// A policy kind plus its exploration hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub initial_epsilon: f64,
    pub epsilon_decay: f64,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            initial_epsilon: 1.0,
            epsilon_decay: ExplorationSchedule::DEFAULT_DECAY,
        }
    }

    pub fn with_decay(mut self, decay: f64) -> Self {
        self.epsilon_decay = decay;
        self
    }

    pub fn with_initial_epsilon(mut self, epsilon: f64) -> Self {
        self.initial_epsilon = epsilon;
        self
    }

    pub fn schedule(&self) -> Result<ExplorationSchedule> {
        ExplorationSchedule::new(self.initial_epsilon, self.epsilon_decay)
    }

    /// Builds the policy for `player`.
    pub fn build(&self, player: usize, n_players: usize, n_arms: usize) -> Result<Box<dyn Policy>> {
        let schedule = self.schedule()?;
        Ok(match self.kind {
            PolicyKind::Ucb1 => Box::new(Ucb1::new(n_arms)),
            PolicyKind::EpsilonGreedy => Box::new(EpsilonGreedy::new(n_arms, schedule)),
            PolicyKind::Thompson => Box::new(Thompson::new(n_arms)),
            PolicyKind::AsymptoticallyOptimal => {
                Box::new(AsymptoticallyOptimal::new(n_arms, n_players, schedule))
            }
            PolicyKind::OptimalCycle => Box::new(OptimalCycle::new(player, n_arms, n_players, schedule)?),
        })
    }
}
