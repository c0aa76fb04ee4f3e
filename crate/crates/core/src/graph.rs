//! Per-turn Erdős–Rényi communication graphs over the players.

use rand::Rng;

use crate::error::{param, Result};
use crate::rng::SimRng;

/// Undirected graph on players `0..n_players`, regenerated every turn.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunicationGraph {
    n_players: usize,
    alpha: f64,
    /// Unordered pairs stored as `(i, j)` with `i < j`, in lexicographic order.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CommunicationGraph {
    pub fn n_players(&self) -> usize {
        self.n_players
    }

    /// The connectivity the graph was drawn with.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `player`, ascending.
    pub fn neighbors(&self, player: usize) -> &[usize] {
        &self.adjacency[player]
    }

    pub fn are_connected(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }
}

/// Includes each of the `n(n-1)/2` pairs independently with probability
/// `alpha`. Pairs are tested in lexicographic order, one uniform draw each.
pub fn sample_graph(n_players: usize, alpha: f64, rng: &mut SimRng) -> Result<CommunicationGraph> {
    if !(0.0..=1.0).contains(&alpha) {
        return param(format!("connectivity {alpha} is outside [0, 1]"));
    }
    if n_players == 0 {
        return param("a communication graph needs at least one player");
    }
    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); n_players];
    for i in 0..n_players {
        for j in (i + 1)..n_players {
            if rng.random::<f64>() < alpha {
                edges.push((i, j));
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(CommunicationGraph {
        n_players,
        alpha,
        edges,
        adjacency,
    })
}
