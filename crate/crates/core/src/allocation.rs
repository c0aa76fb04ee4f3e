//! Optimal per-player arm-sampling distribution under full communication.
//!
//! When every player shares the same estimates, all of them sample arms from
//! the same distribution `c`. An arm then goes unpulled with probability
//! `(1 - c_i)^N`, so the expected per-turn loss is `Σ (1 - c_i)^N μ_i`.
//! Minimizing it over the simplex equalizes `(1 - c_i)^(N-1) μ_i = A` across
//! the active arms, giving
//!
//! ```text
//! c_i = 1 - (|H| - 1) / Σ_{k∈H} (μ_i / μ_k)^(1/(N-1))
//! ```
//!
//! Arms whose unconstrained `c_i` is not positive are dropped from the active
//! set `H` and the rest are recomputed until every active arm is positive.

use crate::arms::descending_order;
use crate::error::{param, Result};

/// Floor applied to observed means before they reach [`optimal_allocation`].
pub const MEAN_FLOOR: f64 = 1e-6;

const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Active set, pull probabilities and the equalized constant `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    /// Arms with positive probability, ascending.
    pub active: Vec<usize>,
    /// One probability per arm; zero outside the active set.
    pub probabilities: Vec<f64>,
    /// Common value of `(1 - c_i)^(N-1) μ_i` over the active set.
    pub equalized: f64,
}

impl Allocation {
    pub fn is_active(&self, arm: usize) -> bool {
        self.probabilities[arm] > 0.0
    }
}

/// Closed-form allocation with iterated bulk discard of non-positive arms.
///
/// A single player (`n_players == 1`) puts all mass on the best arm, lowest
/// index on ties.
pub fn optimal_allocation(means: &[f64], n_players: usize) -> Result<Allocation> {
    if means.is_empty() {
        return param("allocation needs at least one arm");
    }
    if let Some((i, m)) = means.iter().enumerate().find(|(_, m)| m.is_nan() || **m <= 0.0) {
        return param(format!("mean of arm {} is {m}; allocation needs positive means", i + 1));
    }
    match n_players {
        0 => return param("allocation needs at least one player"),
        1 => {
            let best = descending_order(means)[0];
            let mut probabilities = vec![0.0; means.len()];
            probabilities[best] = 1.0;
            return Ok(Allocation {
                active: vec![best],
                probabilities,
                equalized: means[best],
            });
        }
        _ => {}
    }

    let exponent = 1.0 / (n_players - 1) as f64;
    let mut active: Vec<usize> = (0..means.len()).collect();
    let mut probabilities = vec![0.0; means.len()];
    loop {
        let others = (active.len() - 1) as f64;
        // Σ_k (μ_i/μ_k)^e = μ_i^e · Σ_k μ_k^-e
        let inv_roots: f64 = active.iter().map(|&k| means[k].powf(-exponent)).sum();
        for &i in &active {
            probabilities[i] = 1.0 - others / (means[i].powf(exponent) * inv_roots);
        }
        let before = active.len();
        active.retain(|&i| probabilities[i] > 0.0);
        if active.len() == before {
            break;
        }
        for p in probabilities.iter_mut() {
            if *p <= 0.0 {
                *p = 0.0;
            }
        }
    }

    // A = [(|H|-1) / Σ_{k∈H} μ_k^(-1/(N-1))]^(N-1)
    let inv_roots: f64 = active.iter().map(|&k| means[k].powf(-exponent)).sum();
    let equalized = ((active.len() - 1) as f64 / inv_roots).powi((n_players - 1) as i32);

    Ok(Allocation {
        active,
        probabilities,
        equalized,
    })
}

fn check_distribution(means: &[f64], probabilities: &[f64]) -> Result<()> {
    if means.len() != probabilities.len() {
        return param(format!(
            "{} means but {} probabilities",
            means.len(),
            probabilities.len()
        ));
    }
    if probabilities.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return param("probabilities must lie in [0, 1]");
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return param(format!("probabilities sum to {total}, not 1"));
    }
    Ok(())
}

/// Expected reward left on the table per turn: `Σ (1 - c_i)^N μ_i`.
pub fn expected_turn_loss(means: &[f64], probabilities: &[f64], n_players: usize) -> Result<f64> {
    check_distribution(means, probabilities)?;
    Ok(means
        .iter()
        .zip(probabilities)
        .map(|(&mu, &c)| (1.0 - c).powi(n_players as i32) * mu)
        .sum())
}

/// Expected reward collected per turn: `Σ (1 - (1 - c_i)^N) μ_i`.
pub fn expected_turn_gain(means: &[f64], probabilities: &[f64], n_players: usize) -> Result<f64> {
    check_distribution(means, probabilities)?;
    Ok(means
        .iter()
        .zip(probabilities)
        .map(|(&mu, &c)| (1.0 - (1.0 - c).powi(n_players as i32)) * mu)
        .sum())
}

/// Sum of the `n_players` largest means: the per-turn reward of perfect
/// coordination onto distinct best arms.
pub fn top_n_sum(means: &[f64], n_players: usize) -> Result<f64> {
    if n_players > means.len() {
        return param(format!(
            "{n_players} players but only {} arms; the top-N sum is undefined",
            means.len()
        ));
    }
    Ok(descending_order(means)
        .into_iter()
        .take(n_players)
        .map(|i| means[i])
        .sum())
}

/// Exhaustive search over the simplex lattice with spacing `resolution`.
///
/// Returns the loss minimizer (first one found, in lexicographic lattice
/// order) and its loss. Cost grows as `(1/resolution)^(S-1)`; intended for
/// verifying [`optimal_allocation`] on small instances.
pub fn brute_force_allocation(
    means: &[f64],
    n_players: usize,
    resolution: f64,
) -> Result<(Vec<f64>, f64)> {
    if means.is_empty() {
        return param("brute force needs at least one arm");
    }
    if !(resolution > 0.0 && resolution <= 1.0) {
        return param(format!("resolution {resolution} must lie in (0, 1]"));
    }
    let steps = (1.0 / resolution).round();
    if (steps * resolution - 1.0).abs() > 1e-9 {
        return param(format!("resolution {resolution} does not divide 1 evenly"));
    }
    let steps = steps as usize;
    let n = n_players as i32;
    let loss_of = |units: &[usize]| -> f64 {
        units
            .iter()
            .zip(means)
            .map(|(&u, &mu)| (1.0 - u as f64 / steps as f64).powi(n) * mu)
            .sum()
    };

    let mut units = vec![0usize; means.len()];
    let mut best = (Vec::new(), f64::INFINITY);
    search_lattice(&mut units, 0, steps, &loss_of, &mut best);
    let probs = best.0.iter().map(|&u| u as f64 / steps as f64).collect();
    Ok((probs, best.1))
}

/// Fills `units[pos..]` with every split of `remaining`; the last arm takes
/// whatever is left.
fn search_lattice(
    units: &mut [usize],
    pos: usize,
    remaining: usize,
    loss_of: &dyn Fn(&[usize]) -> f64,
    best: &mut (Vec<usize>, f64),
) {
    if pos + 1 == units.len() {
        units[pos] = remaining;
        let loss = loss_of(units);
        if loss < best.1 {
            *best = (units.to_vec(), loss);
        }
        return;
    }
    for u in 0..=remaining {
        units[pos] = u;
        search_lattice(units, pos + 1, remaining - u, loss_of, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Lowest-mean-first discard, one arm at a time.
    fn sequential_discard(means: &[f64], n: usize) -> Vec<usize> {
        let e = 1.0 / (n - 1) as f64;
        let mut active: Vec<usize> = (0..means.len()).collect();
        loop {
            let h = active.len() as f64;
            let weakest = active
                .iter()
                .copied()
                .filter(|&i| {
                    let d: f64 = active.iter().map(|&k| (means[i] / means[k]).powf(e)).sum();
                    1.0 - (h - 1.0) / d <= 0.0
                })
                .min_by(|&a, &b| means[a].total_cmp(&means[b]).then(b.cmp(&a)));
            match weakest {
                Some(w) => active.retain(|&i| i != w),
                None => return active,
            }
        }
    }

    #[test]
    fn two_arm_anchor() {
        // Minimizing m1²·0.9 + m2²·0.1 with m1 + m2 = 1 gives m1 = 0.1, m2 = 0.9.
        let a = optimal_allocation(&[0.9, 0.1], 2).unwrap();
        assert!(close(a.probabilities[0], 0.9, 1e-12));
        assert!(close(a.probabilities[1], 0.1, 1e-12));
        assert!(close(a.equalized, 0.09, 1e-12));
        assert_eq!(a.active, vec![0, 1]);

        let (oracle, loss) = brute_force_allocation(&[0.9, 0.1], 2, 0.01).unwrap();
        assert!(close(oracle[0], 0.9, 0.01) && close(oracle[1], 0.1, 0.01), "{oracle:?}");
        assert!(close(loss, 0.09, 1e-9));
    }

    #[test]
    fn symmetric_means_split_evenly() {
        for s in 1..7 {
            for n in 2..6 {
                let a = optimal_allocation(&vec![0.37; s], n).unwrap();
                for p in &a.probabilities {
                    assert!(close(*p, 1.0 / s as f64, 1e-12), "s={s} n={n} {a:?}");
                }
            }
        }
        let (oracle, _) = brute_force_allocation(&[0.4, 0.4], 3, 0.1).unwrap();
        assert!(close(oracle[0], 0.5, 1e-12) && close(oracle[1], 0.5, 1e-12));
    }

    #[test]
    fn weak_arm_is_discarded() {
        // First pass: c3 = 1 - 2 / (0.02 + 0.02 + 1) < 0.
        let first_pass = 1.0 - 2.0 / (0.01 / 0.5 + 0.01 / 0.5 + 1.0);
        assert!(first_pass < 0.0);
        let a = optimal_allocation(&[0.5, 0.5, 0.01], 2).unwrap();
        assert_eq!(a.active, vec![0, 1]);
        assert_eq!(a.probabilities, vec![0.5, 0.5, 0.0]);

        let (oracle, _) = brute_force_allocation(&[0.5, 0.5, 0.01], 2, 0.01).unwrap();
        assert!(oracle[2] <= 0.01 + 1e-12, "{oracle:?}");
    }

    #[test]
    fn single_player_takes_best_arm() {
        let a = optimal_allocation(&[0.3, 0.8, 0.8], 1).unwrap();
        assert_eq!(a.probabilities, vec![0.0, 1.0, 0.0]);
        assert_eq!(a.active, vec![1]);
    }

    #[test]
    fn single_arm_gets_all_mass() {
        let a = optimal_allocation(&[0.4], 3).unwrap();
        assert_eq!(a.probabilities, vec![1.0]);
        assert_eq!(a.equalized, 0.0);
    }

    #[test]
    fn rejects_non_positive_means() {
        assert!(optimal_allocation(&[0.5, 0.0], 2).is_err());
        assert!(optimal_allocation(&[0.5, -1.0], 2).is_err());
        assert!(optimal_allocation(&[], 2).is_err());
        assert!(optimal_allocation(&[0.5], 0).is_err());
    }

    #[test]
    fn loss_and_gain_anchors() {
        let mu = [0.9, 0.1];
        assert!(close(expected_turn_loss(&mu, &[1.0, 0.0], 2).unwrap(), 0.1, 1e-15));
        assert!(close(expected_turn_loss(&mu, &[0.5, 0.5], 2).unwrap(), 0.25, 1e-15));
        assert!(close(expected_turn_loss(&mu, &[0.9, 0.1], 2).unwrap(), 0.09, 1e-15));

        assert!(close(expected_turn_gain(&[0.6, 0.3, 0.1], &[1.0, 0.0, 0.0], 4).unwrap(), 0.6, 1e-15));
        // Four equally likely joint choices: both on 1, both on 2, or split.
        let enumerated = 0.25 * 0.9 + 0.25 * 0.1 + 0.5 * 1.0;
        assert!(close(expected_turn_gain(&mu, &[0.5, 0.5], 2).unwrap(), enumerated, 1e-15));
        assert!(close(expected_turn_gain(&mu, &[0.9, 0.1], 2).unwrap(), 0.91, 1e-15));
    }

    #[test]
    fn loss_rejects_malformed_input() {
        assert!(expected_turn_loss(&[0.5, 0.5], &[1.0], 2).is_err());
        assert!(expected_turn_loss(&[0.5, 0.5], &[0.7, 0.7], 2).is_err());
        assert!(expected_turn_gain(&[0.5, 0.5], &[1.5, -0.5], 2).is_err());
    }

    #[test]
    fn top_n_sums() {
        use crate::arms::presets::{MU1, MU2};
        assert!(close(top_n_sum(&MU1, 5).unwrap(), 3.5, 1e-12));
        assert!(close(top_n_sum(&MU2, 5).unwrap(), 3.3, 1e-12));
        let all: f64 = MU1.iter().sum();
        assert!(close(top_n_sum(&MU1, 10).unwrap(), all, 1e-12));
        assert!(top_n_sum(&MU1, 11).is_err());
    }

    #[test]
    fn brute_force_rejects_bad_resolution() {
        assert!(brute_force_allocation(&[0.5, 0.5], 2, 0.3).is_err());
        assert!(brute_force_allocation(&[0.5, 0.5], 2, 0.0).is_err());
        assert!(brute_force_allocation(&[0.5, 0.5], 2, 2.0).is_err());
        assert!(brute_force_allocation(&[], 2, 0.1).is_err());
    }

    #[test]
    fn brute_force_enumerates_whole_simplex() {
        // With all mass forced onto the best lattice point by a dominant arm.
        let (p, _) = brute_force_allocation(&[1.0, 1e-9, 1e-9], 2, 0.5).unwrap();
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let (p, _) = brute_force_allocation(&[1e-9, 1e-9, 1.0], 2, 0.25).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 1.0]);
        let (p, l) = brute_force_allocation(&[0.7], 3, 0.1).unwrap();
        assert_eq!(p, vec![1.0]);
        assert_eq!(l, 0.0);
    }

    fn instance() -> impl Strategy<Value = (Vec<f64>, usize)> {
        (prop::collection::vec(0.05f64..1.0, 2..=6), 2usize..=6)
    }

    proptest! {
        #[test]
        fn kkt_equalization((means, n) in instance()) {
            let a = optimal_allocation(&means, n).unwrap();
            let total: f64 = a.active.iter().map(|&i| a.probabilities[i]).sum();
            prop_assert!((total - 1.0).abs() <= 1e-12, "sum {}", total);
            for (i, &m) in means.iter().enumerate() {
                if a.active.contains(&i) {
                    let c = a.probabilities[i];
                    prop_assert!(c > 0.0 && c <= 1.0);
                    let lhs = (1.0 - c).powi(n as i32 - 1) * m;
                    prop_assert!((lhs - a.equalized).abs() <= 1e-9, "{} vs {}", lhs, a.equalized);
                } else {
                    prop_assert_eq!(a.probabilities[i], 0.0);
                }
            }
        }

        #[test]
        fn discarded_arms_stay_discarded((means, n) in instance()) {
            // Re-adding a dropped arm at the final A gives c = 1 - (A/μ)^(1/(N-1)) ≤ 0.
            let a = optimal_allocation(&means, n).unwrap();
            for i in (0..means.len()).filter(|i| !a.active.contains(i)) {
                let c = 1.0 - (a.equalized / means[i]).powf(1.0 / (n - 1) as f64);
                prop_assert!(c <= 1e-12, "arm {} would get {}", i, c);
            }
        }

        #[test]
        fn bulk_and_sequential_discard_agree((means, n) in instance()) {
            let a = optimal_allocation(&means, n).unwrap();
            prop_assert_eq!(a.active, sequential_discard(&means, n));
        }

        #[test]
        fn scale_invariance((means, n) in instance(), gamma in 0.1f64..1.0) {
            let a = optimal_allocation(&means, n).unwrap();
            let scaled: Vec<f64> = means.iter().map(|m| m * gamma).collect();
            let b = optimal_allocation(&scaled, n).unwrap();
            prop_assert_eq!(&a.active, &b.active);
            for (x, y) in a.probabilities.iter().zip(&b.probabilities) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn probabilities_follow_means((means, n) in instance()) {
            let a = optimal_allocation(&means, n).unwrap();
            for &i in &a.active {
                for &j in &a.active {
                    if means[i] >= means[j] {
                        prop_assert!(a.probabilities[i] >= a.probabilities[j] - 1e-12);
                    }
                }
            }
        }

        #[test]
        fn gain_plus_loss_is_total(means in prop::collection::vec(0.0f64..1.0, 1..6), n in 1usize..6) {
            let c = vec![1.0 / means.len() as f64; means.len()];
            let total: f64 = means.iter().sum();
            let g = expected_turn_gain(&means, &c, n).unwrap();
            let l = expected_turn_loss(&means, &c, n).unwrap();
            prop_assert!((g + l - total).abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn closed_form_beats_lattice(
            means in prop::collection::vec(0.05f64..1.0, 2..=3),
            n in 2usize..=3,
        ) {
            let a = optimal_allocation(&means, n).unwrap();
            let closed = expected_turn_loss(&means, &a.probabilities, n).unwrap();
            let (_, oracle) = brute_force_allocation(&means, n, 0.01).unwrap();
            prop_assert!(closed <= oracle + 1e-12, "closed {} oracle {}", closed, oracle);
        }
    }
}
