//! Optimal Cycle: collision-aware rotation through the top-N arms.
//!
//! Every player ranks arms by observed mean and, outside exploration,
//! rotates through the N best: the player in cycle slot `o` pulls the arm of
//! rank `(t + o) mod N` at turn `t`. Players with distinct slots never
//! collide. Each player tracks its neighbors' slots relative to its own from
//! the arms they report; a relative offset of zero means a shared slot, and
//! the player then jumps by a random shift drawn from zero and the offsets
//! no known neighbor occupies.
//!
//! Exploration pulls leave the slot untouched, so a player rejoins the
//! rotation at its own slot on the next exploiting turn. Reports are mapped
//! to ranks with the ranking the player held when those pulls were made, so
//! a reordering of the top arms between turns does not fake a collision.

use std::iter;

use rand::Rng;

use super::stats::{ArmStats, ExplorationSchedule};
use super::Policy;
use crate::arms::descending_order;
use crate::collision::Observation;
use crate::error::{Error, Result};
use crate::rng::SimRng;

#[derive(Debug, Clone, PartialEq)]
pub struct CycleState {
    n_players: usize,
    own_offset: usize,
    /// Last known slot of each other player relative to ours. The entry for
    /// the owning player is always `None`.
    neighbor_offsets: Vec<Option<usize>>,
    last_choice: Option<usize>,
    /// Top-N ranking in force at the previous turn; reports about that turn
    /// are read against it.
    previous_top: Option<Vec<usize>>,
    schedule: ExplorationSchedule,
}

impl CycleState {
    /// Starts `player` in slot `player mod N` with no knowledge of others.
    pub fn new(player: usize, n_players: usize, schedule: ExplorationSchedule) -> Self {
        Self::with_offset(player % n_players.max(1), n_players, schedule)
    }

    pub fn with_offset(own_offset: usize, n_players: usize, schedule: ExplorationSchedule) -> Self {
        Self {
            n_players,
            own_offset,
            neighbor_offsets: vec![None; n_players],
            last_choice: None,
            previous_top: None,
            schedule,
        }
    }

    pub fn own_offset(&self) -> usize {
        self.own_offset
    }

    pub fn neighbor_offset(&self, player: usize) -> Option<usize> {
        self.neighbor_offsets[player]
    }

    pub fn set_neighbor_offset(&mut self, player: usize, offset: Option<usize>) {
        self.neighbor_offsets[player] = offset.map(|o| o % self.n_players);
    }

    pub fn last_choice(&self) -> Option<usize> {
        self.last_choice
    }

    pub fn schedule(&self) -> &ExplorationSchedule {
        &self.schedule
    }

    pub fn schedule_mut(&mut self) -> &mut ExplorationSchedule {
        &mut self.schedule
    }

    /// Rank (within the top N) this player occupies at `turn`.
    pub fn slot_at(&self, turn: u64) -> usize {
        let n = self.n_players as u64;
        ((turn % n + self.own_offset as u64) % n) as usize
    }

    fn knows_offset(&self, offset: usize) -> bool {
        self.neighbor_offsets.contains(&Some(offset))
    }

    /// Applies a shift of `r` slots: our slot advances and every known
    /// neighbor moves back by `r` relative to us.
    fn shift(&mut self, r: usize) {
        let n = self.n_players;
        self.own_offset = (self.own_offset + r) % n;
        for o in self.neighbor_offsets.iter_mut().flatten() {
            *o = (*o + n - r) % n;
        }
    }
}

/// One Optimal Cycle decision for `turn` (0-based).
///
/// `reports` are the `(player, arm)` pairs other players shared at the end of
/// the previous turn. The first turn, and any turn where the ε coin lands on
/// exploration, pulls a uniform arm over all arms.
pub fn optimal_cycle_select(
    state: &mut CycleState,
    stats: &ArmStats,
    reports: &[(usize, usize)],
    turn: u64,
    rng: &mut SimRng,
) -> Result<usize> {
    let n = state.n_players;
    let n_arms = stats.n_arms();
    if n == 0 || n > n_arms {
        return Err(Error::Config(format!(
            "optimal cycle needs 1 <= players <= arms, got {n} players and {n_arms} arms"
        )));
    }

    let mut top = descending_order(&stats.means_or_zero());
    top.truncate(n);
    let previous_top = state.previous_top.replace(top.clone());

    if turn == 0 || rng.random::<f64>() < state.schedule.epsilon() {
        let arm = rng.random_range(0..n_arms);
        state.last_choice = Some(arm);
        return Ok(arm);
    }

    let previous_slot = state.slot_at(turn - 1);
    let previous_top = previous_top.as_deref().unwrap_or(&top);
    for &(player, arm) in reports {
        if let Some(rank) = previous_top.iter().position(|&a| a == arm) {
            state.neighbor_offsets[player] = Some((rank + n - previous_slot) % n);
        }
    }

    if state.knows_offset(0) {
        let candidates: Vec<usize> = iter::once(0)
            .chain((1..n).filter(|&r| !state.knows_offset(r)))
            .collect();
        let r = candidates[rng.random_range(0..candidates.len())];
        state.shift(r);
    }

    let arm = top[state.slot_at(turn)];
    state.last_choice = Some(arm);
    Ok(arm)
}

/// A player running Optimal Cycle.
#[derive(Debug, Clone)]
pub struct OptimalCycle {
    player: usize,
    stats: ArmStats,
    state: CycleState,
    reports: Vec<(usize, usize)>,
}

impl OptimalCycle {
    pub fn new(player: usize, n_arms: usize, n_players: usize, schedule: ExplorationSchedule) -> Result<Self> {
        if n_players == 0 || n_players > n_arms {
            return Err(Error::Config(format!(
                "optimal cycle needs 1 <= players <= arms, got {n_players} players and {n_arms} arms"
            )));
        }
        Ok(Self {
            player,
            stats: ArmStats::new(n_arms),
            state: CycleState::new(player, n_players, schedule),
            reports: Vec::new(),
        })
    }

    pub fn state(&self) -> &CycleState {
        &self.state
    }
}

impl Policy for OptimalCycle {
    fn select(&mut self, turn: u64, rng: &mut SimRng) -> usize {
        let reports = std::mem::take(&mut self.reports);
        optimal_cycle_select(&mut self.state, &self.stats, &reports, turn, rng)
            .expect("player count checked at construction")
    }

    fn ingest(&mut self, observations: &[Observation]) {
        self.stats.ingest(observations);
        self.reports = observations
            .iter()
            .filter(|o| o.origin != self.player)
            .map(|o| (o.origin, o.arm))
            .collect();
    }

    fn end_turn(&mut self) {
        self.state.schedule.decay();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn greedy_schedule() -> ExplorationSchedule {
        ExplorationSchedule::new(0.0, 0.5).unwrap()
    }

    /// Arm 2 best, arm 0 second, arm 1 last.
    fn ranked_stats() -> ArmStats {
        ArmStats::from_counts(vec![10, 10, 10], vec![5, 1, 9]).unwrap()
    }

    #[test]
    fn too_many_players_is_a_config_error() {
        assert!(OptimalCycle::new(0, 2, 3, greedy_schedule()).is_err());
        let mut state = CycleState::new(0, 3, greedy_schedule());
        let r = optimal_cycle_select(&mut state, &ArmStats::new(2), &[], 1, &mut seeded(0));
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn full_exploration_is_uniform() {
        let mut state = CycleState::new(0, 2, ExplorationSchedule::new(1.0, 0.5).unwrap());
        let stats = ranked_stats();
        let mut rng = seeded(1);
        let mut hits = [0usize; 3];
        for t in 1..9_001 {
            hits[optimal_cycle_select(&mut state, &stats, &[], t, &mut rng).unwrap()] += 1;
        }
        for h in hits {
            assert!((h as f64 / 9_000.0 - 1.0 / 3.0).abs() <= 0.02, "{hits:?}");
        }
        assert_eq!(state.own_offset(), 0);
    }

    #[test]
    fn first_turn_is_random() {
        let stats = ranked_stats();
        let mut rng = seeded(2);
        let mut seen = [false; 3];
        for _ in 0..200 {
            let mut state = CycleState::new(0, 2, greedy_schedule());
            seen[optimal_cycle_select(&mut state, &stats, &[], 0, &mut rng).unwrap()] = true;
        }
        assert_eq!(seen, [true; 3]);
    }

    #[test]
    fn distinct_slots_alternate_without_collisions() {
        // Top two arms are [2, 0]. Slots 0 and 1 pull (2, 0) then (0, 2).
        let stats = ranked_stats();
        let mut rng = seeded(3);
        let mut a = CycleState::with_offset(0, 2, greedy_schedule());
        let mut b = CycleState::with_offset(1, 2, greedy_schedule());
        let mut last = (None, None);
        for t in 2..40u64 {
            let reports_a = last.1.map(|arm| vec![(1, arm)]).unwrap_or_default();
            let reports_b = last.0.map(|arm| vec![(0, arm)]).unwrap_or_default();
            let x = optimal_cycle_select(&mut a, &stats, &reports_a, t, &mut rng).unwrap();
            let y = optimal_cycle_select(&mut b, &stats, &reports_b, t, &mut rng).unwrap();
            assert_ne!(x, y);
            if t % 2 == 0 {
                assert_eq!((x, y), (2, 0));
            } else {
                assert_eq!((x, y), (0, 2));
            }
            last = (Some(x), Some(y));
        }
        assert_eq!(a.own_offset(), 0);
        assert_eq!(b.own_offset(), 1);
        assert_eq!(a.neighbor_offset(1), Some(1));
        assert_eq!(b.neighbor_offset(0), Some(1));
    }

    #[test]
    fn shared_slot_resolves_with_probability_one_half() {
        // Both players sat in slot 0 last turn and saw each other pull the
        // same arm. Each draws r from {0, 1}; they collide again iff the
        // draws match, which happens in 2 of the 4 equally likely outcomes.
        let stats = ranked_stats();
        let mut rng = seeded(4);
        let trials = 10_000;
        let mut repeats = 0;
        let turn = 7u64;
        for _ in 0..trials {
            let mut a = CycleState::with_offset(0, 2, greedy_schedule());
            let mut b = CycleState::with_offset(0, 2, greedy_schedule());
            let shared = [2, 0][a.slot_at(turn - 1)];
            let x = optimal_cycle_select(&mut a, &stats, &[(1, shared)], turn, &mut rng).unwrap();
            let y = optimal_cycle_select(&mut b, &stats, &[(0, shared)], turn, &mut rng).unwrap();
            if x == y {
                repeats += 1;
                assert_eq!(a.own_offset(), b.own_offset());
            } else {
                assert_ne!(a.own_offset(), b.own_offset());
            }
        }
        let rate = repeats as f64 / trials as f64;
        assert!((rate - 0.5).abs() <= 0.02, "{rate}");
    }

    #[test]
    fn shift_avoids_known_occupied_slots() {
        // N = 4: a neighbor in our slot (offset 0) and others at 1 and 3
        // leave candidate shifts {0, 2}.
        let stats = ArmStats::from_counts(vec![10; 5], vec![9, 8, 7, 6, 1]).unwrap();
        let mut rng = seeded(5);
        let mut shifts = std::collections::BTreeSet::new();
        for _ in 0..400 {
            let mut s = CycleState::with_offset(0, 4, greedy_schedule());
            s.set_neighbor_offset(2, Some(1));
            s.set_neighbor_offset(3, Some(3));
            let turn = 9u64;
            let prev = s.slot_at(turn - 1);
            // Player 1 pulled our previous arm.
            optimal_cycle_select(&mut s, &stats, &[(1, prev)], turn, &mut rng).unwrap();
            shifts.insert(s.own_offset());
            let mut offsets: Vec<usize> = (1..4).filter_map(|p| s.neighbor_offset(p)).collect();
            offsets.sort_unstable();
            if s.own_offset() == 2 {
                // Everyone moved back by 2 relative to us.
                assert_eq!(offsets, vec![1, 2, 3]);
            }
        }
        assert_eq!(shifts.into_iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn reports_outside_top_n_are_ignored() {
        let stats = ranked_stats();
        let mut s = CycleState::with_offset(0, 2, greedy_schedule());
        // Arm 1 is ranked last, outside the top two.
        optimal_cycle_select(&mut s, &stats, &[(1, 1)], 5, &mut seeded(6)).unwrap();
        assert_eq!(s.neighbor_offset(1), None);
        assert_eq!(s.own_offset(), 0);
    }

    #[test]
    fn exploration_does_not_move_the_slot() {
        let stats = ranked_stats();
        let mut s = CycleState::with_offset(1, 2, ExplorationSchedule::new(1.0, 0.5).unwrap());
        let mut rng = seeded(7);
        optimal_cycle_select(&mut s, &stats, &[], 3, &mut rng).unwrap();
        *s.schedule_mut() = greedy_schedule();
        let arm = optimal_cycle_select(&mut s, &stats, &[], 4, &mut rng).unwrap();
        assert_eq!(arm, [2, 0][(4 + 1) % 2]);
    }

    #[test]
    fn policy_only_records_other_players() {
        let mut p = OptimalCycle::new(1, 3, 2, greedy_schedule()).unwrap();
        p.ingest(&[
            Observation { origin: 1, arm: 2, reward: 1 },
            Observation { origin: 0, arm: 0, reward: 0 },
        ]);
        assert_eq!(p.reports, vec![(0, 0)]);
        assert_eq!(p.stats.total(), 2);
    }
}
