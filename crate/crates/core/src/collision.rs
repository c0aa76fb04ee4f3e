//! Winner-takes-reward collision resolution.
//!
//! When several players pull the same arm, one of them, chosen uniformly,
//! receives the arm's realization for the turn; the others receive zero.
//! Players only ever learn their post-collision reward.

use rand::Rng;

use crate::arms::TurnDraw;
use crate::error::{param, Result};
use crate::rng::SimRng;

/// Outcome of one turn after collisions are resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnRecord {
    /// Arm chosen by each player.
    pub choices: Vec<usize>,
    /// Winning player per arm; `None` for arms nobody pulled.
    pub winners: Vec<Option<usize>>,
    /// Post-collision reward of each player.
    pub player_rewards: Vec<u8>,
    /// Whether each arm was pulled by at least one player.
    pub pulled: Vec<bool>,
}

impl TurnRecord {
    /// Number of players who lost a collision, i.e. players minus distinct arms pulled.
    pub fn collisions(&self) -> usize {
        self.choices.len() - self.pulled.iter().filter(|&&p| p).count()
    }

    /// Sum of all player rewards.
    pub fn realized_gain(&self) -> u32 {
        self.player_rewards.iter().map(|&r| u32::from(r)).sum()
    }

    /// The observation a player shares with itself and its neighbors.
    pub fn observation(&self, player: usize) -> Observation {
        Observation {
            origin: player,
            arm: self.choices[player],
            reward: self.player_rewards[player],
        }
    }
}

/// An `(origin, arm, realized reward)` report, shared at the end of a turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    pub origin: usize,
    pub arm: usize,
    pub reward: u8,
}

/// Resolves the turn. Arms are processed in ascending order; a uniform
/// winner is drawn only for arms with two or more claimants.
pub fn resolve_collisions(choices: &[usize], draw: &TurnDraw, rng: &mut SimRng) -> Result<TurnRecord> {
    let n_arms = draw.rewards.len();
    if let Some((p, &a)) = choices.iter().enumerate().find(|(_, &a)| a >= n_arms) {
        return param(format!("player {p} chose arm {a}, but there are only {n_arms} arms"));
    }

    let mut claimants: Vec<Vec<usize>> = vec![Vec::new(); n_arms];
    for (player, &arm) in choices.iter().enumerate() {
        claimants[arm].push(player);
    }

    let mut winners = vec![None; n_arms];
    let mut player_rewards = vec![0u8; choices.len()];
    for (arm, players) in claimants.iter().enumerate() {
        let winner = match players.len() {
            0 => continue,
            1 => players[0],
            k => players[rng.random_range(0..k)],
        };
        winners[arm] = Some(winner);
        player_rewards[winner] = draw.rewards[arm];
    }
    let pulled = winners.iter().map(Option::is_some).collect();

    Ok(TurnRecord {
        choices: choices.to_vec(),
        winners,
        player_rewards,
        pulled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    fn draw(r: &[u8]) -> TurnDraw {
        TurnDraw { rewards: r.to_vec() }
    }

    #[test]
    fn no_collision_pays_everyone() {
        let rec = resolve_collisions(&[0, 1, 2], &draw(&[1, 1, 0]), &mut seeded(0)).unwrap();
        assert_eq!(rec.player_rewards, vec![1, 1, 0]);
        assert_eq!(rec.pulled, vec![true, true, true]);
        assert_eq!(rec.collisions(), 0);
    }

    #[test]
    fn two_way_collision_pays_one() {
        let mut rng = seeded(5);
        for _ in 0..100 {
            let rec = resolve_collisions(&[0, 0], &draw(&[1, 0]), &mut rng).unwrap();
            let mut r = rec.player_rewards.clone();
            r.sort_unstable();
            assert_eq!(r, vec![0, 1]);
            assert_eq!(rec.collisions(), 1);
            assert_eq!(rec.pulled, vec![true, false]);
        }
    }

    #[test]
    fn out_of_range_choice_is_rejected() {
        assert!(resolve_collisions(&[0, 3], &draw(&[1, 1, 1]), &mut seeded(0)).is_err());
    }

    #[test]
    fn three_way_winner_is_uniform() {
        let trials = 30_000;
        let mut wins = [0usize; 3];
        let mut rng = seeded(6);
        for _ in 0..trials {
            let rec = resolve_collisions(&[1, 1, 1], &draw(&[0, 1, 0]), &mut rng).unwrap();
            wins[rec.winners[1].unwrap()] += 1;
        }
        let expected = trials as f64 / 3.0;
        let mut chi2 = 0.0;
        for w in wins {
            let frac = w as f64 / trials as f64;
            assert!((frac - 1.0 / 3.0).abs() <= 0.01, "{wins:?}");
            chi2 += (w as f64 - expected).powi(2) / expected;
        }
        // 2 dof, 1% critical value.
        assert!(chi2 < 9.210, "chi-square {chi2}");
    }

    proptest! {
        #[test]
        fn one_payout_per_pulled_arm(
            choices in prop::collection::vec(0usize..6, 1..9),
            rewards in prop::collection::vec(0u8..2, 6),
            seed in any::<u64>(),
        ) {
            let d = draw(&rewards);
            let rec = resolve_collisions(&choices, &d, &mut seeded(seed)).unwrap();
            let paid: u32 = (0..6).filter(|&i| rec.pulled[i]).map(|i| u32::from(d.rewards[i])).sum();
            prop_assert_eq!(rec.realized_gain(), paid);
            for i in 0..6 {
                prop_assert_eq!(rec.pulled[i], choices.contains(&i));
            }
            for (p, &a) in choices.iter().enumerate() {
                let expected = if rec.winners[a] == Some(p) { d.rewards[a] } else { 0 };
                prop_assert_eq!(rec.player_rewards[p], expected);
            }
        }
    }
}
