//! Turn loop, regret accounting and replicated experiments.

mod experiment;
mod metrics;
mod turn;

#[cfg(feature = "parallel")]
pub use experiment::run_replications_parallel;
pub use experiment::{
    run_experiment, run_replication, run_replications, run_replications_sequential, run_series,
    ExperimentConfig, ExperimentResult, DEFAULT_REPLICATIONS, DEFAULT_TURNS,
};
pub use metrics::{aggregate, mean_std, Aggregate, Band, MetricsSeries};
pub use turn::{run_turn, TurnOutcome};
