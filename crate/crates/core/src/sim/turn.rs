use crate::arms::{draw_rewards, ArmSet, TurnDraw};
use crate::collision::{resolve_collisions, Observation, TurnRecord};
use crate::error::{param, Result};
use crate::graph::{sample_graph, CommunicationGraph};
use crate::policies::Policy;
use crate::rng::SimRng;

/// Everything that happened in one turn.
#[derive(Debug, Clone)]
pub struct TurnOutcome {
    pub graph: CommunicationGraph,
    pub draw: TurnDraw,
    pub record: TurnRecord,
    /// Observations delivered to each player, its own included.
    pub delivered: Vec<usize>,
}

/// Plays one turn.
///
/// Random draws happen in a fixed order: graph edges, arm rewards, each
/// player's choice in ascending player order, then collision winners in
/// ascending arm order. Observations go out over this turn's graph, after
/// which every player decays its exploration schedule.
pub fn run_turn(
    arms: &ArmSet,
    players: &mut [Box<dyn Policy>],
    alpha: f64,
    turn: u64,
    rng: &mut SimRng,
) -> Result<TurnOutcome> {
    if players.is_empty() {
        return param("a turn needs at least one player");
    }
    let graph = sample_graph(players.len(), alpha, rng)?;
    let draw = draw_rewards(arms, rng);
    let choices: Vec<usize> = players.iter_mut().map(|p| p.select(turn, rng)).collect();
    let record = resolve_collisions(&choices, &draw, rng)?;

    let mut delivered = Vec::with_capacity(players.len());
    let mut inbox: Vec<Observation> = Vec::with_capacity(players.len());
    for (p, player) in players.iter_mut().enumerate() {
        inbox.clear();
        inbox.push(record.observation(p));
        inbox.extend(graph.neighbors(p).iter().map(|&q| record.observation(q)));
        player.ingest(&inbox);
        delivered.push(inbox.len());
    }
    for player in players.iter_mut() {
        player.end_turn();
    }

    Ok(TurnOutcome {
        graph,
        draw,
        record,
        delivered,
    })
}
