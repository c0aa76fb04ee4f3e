//! Decentralized multiplayer Bernoulli bandits.
//!
//! `N` players repeatedly pull `S` Bernoulli arms. When several players pull
//! the same arm, one uniformly chosen player receives its reward and the rest
//! receive nothing. After each turn every player tells its neighbors in a
//! freshly drawn Erdős–Rényi graph which arm it pulled and what it earned.
//!
//! The crate provides the world model ([`arms`], [`graph`], [`collision`]),
//! the closed-form full-communication allocation ([`allocation`]), five
//! player policies ([`policies`]) and a seeded, replicated simulator
//! ([`sim`]).

pub mod allocation;
pub mod arms;
pub mod collision;
pub mod error;
pub mod graph;
pub mod policies;
pub mod rng;
pub mod sim;

pub use arms::{presets, ArmSet};
pub use error::{Error, Result};
pub use policies::{Policy, PolicyKind, PolicySpec};
pub use rng::SimRng;
pub use sim::{ExperimentConfig, MetricsSeries};
