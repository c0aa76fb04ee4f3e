use crate::arms::ArmSet;
use crate::error::{Error, Result};
use crate::policies::{Policy, PolicySpec};
use crate::rng::{replication_stream, SimRng};

use super::metrics::{aggregate, Aggregate, MetricsSeries, RegretAccountant};
use super::turn::run_turn;

pub const DEFAULT_TURNS: u64 = 20_000;
pub const DEFAULT_REPLICATIONS: usize = 20;

/// One experimental condition, replicated.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub arms: ArmSet,
    pub n_players: usize,
    pub alpha: f64,
    pub policy: PolicySpec,
    pub turns: u64,
    pub replications: usize,
    pub base_seed: u64,
}

impl ExperimentConfig {
    /// Defaults for everything except the world and the policy.
    pub fn new(arms: ArmSet, n_players: usize, alpha: f64, policy: PolicySpec) -> Self {
        Self {
            arms,
            n_players,
            alpha,
            policy,
            turns: DEFAULT_TURNS,
            replications: DEFAULT_REPLICATIONS,
            base_seed: 0,
        }
    }

    pub fn n_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_players == 0 {
            return fail("at least one player is required".into());
        }
        if self.n_players > self.n_arms() {
            return fail(format!(
                "{} players but only {} arms; regret needs players <= arms",
                self.n_players,
                self.n_arms()
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return fail(format!("alpha {} is outside [0, 1]", self.alpha));
        }
        if self.turns == 0 {
            return fail("turns must be at least 1".into());
        }
        if self.replications == 0 {
            return fail("replications must be at least 1".into());
        }
        self.policy
            .schedule()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    fn build_players(&self) -> Result<Vec<Box<dyn Policy>>> {
        (0..self.n_players)
            .map(|p| self.policy.build(p, self.n_players, self.n_arms()))
            .collect()
    }
}

/// Runs `turns` turns with the given players on one random stream.
pub fn run_series(
    arms: &ArmSet,
    alpha: f64,
    turns: u64,
    players: &mut [Box<dyn Policy>],
    rng: &mut SimRng,
) -> Result<MetricsSeries> {
    let mut accountant = RegretAccountant::new(arms, players.len())?;
    let mut series = MetricsSeries::default();
    for turn in 0..turns {
        let outcome = run_turn(arms, players, alpha, turn, rng)?;
        accountant.record(&outcome.record, &mut series);
    }
    Ok(series)
}

/// Replication `replication` of `config`, on its own derived stream.
pub fn run_replication(config: &ExperimentConfig, replication: usize) -> Result<MetricsSeries> {
    config.validate()?;
    let mut players = config.build_players()?;
    let mut rng = replication_stream(config.base_seed, replication as u64);
    run_series(&config.arms, config.alpha, config.turns, &mut players, &mut rng)
}

/// All replications, one after another.
pub fn run_replications_sequential(config: &ExperimentConfig) -> Result<Vec<MetricsSeries>> {
    config.validate()?;
    (0..config.replications)
        .map(|r| run_replication(config, r))
        .collect()
}

/// All replications, spread over the rayon pool. Output is in replication order.
#[cfg(feature = "parallel")]
pub fn run_replications_parallel(config: &ExperimentConfig) -> Result<Vec<MetricsSeries>> {
    use rayon::prelude::*;

    config.validate()?;
    (0..config.replications)
        .into_par_iter()
        .map(|r| run_replication(config, r))
        .collect()
}

/// All replications, in parallel when the `parallel` feature is on.
pub fn run_replications(config: &ExperimentConfig) -> Result<Vec<MetricsSeries>> {
    #[cfg(feature = "parallel")]
    {
        run_replications_parallel(config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_replications_sequential(config)
    }
}

/// Raw series plus their aggregate.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub series: Vec<MetricsSeries>,
    pub aggregate: Aggregate,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let series = run_replications(config)?;
    let aggregate = aggregate(&series);
    Ok(ExperimentResult { series, aggregate })
}
