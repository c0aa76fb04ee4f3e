use crate::allocation::top_n_sum;
use crate::arms::ArmSet;
use crate::collision::TurnRecord;
use crate::error::Result;

/// Per-turn metrics of one replication. Index `k` describes turn `k + 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsSeries {
    /// `Σ_i I_{i,k} μ_i`: the mean reward of the arms pulled this turn.
    pub expected_gain: Vec<f64>,
    /// Rewards actually paid out this turn.
    pub realized_gain: Vec<u32>,
    /// `k · top_n_sum(μ, N) - Σ_{j≤k} expected_gain_j`.
    pub cumulative_regret: Vec<f64>,
    /// Players that lost a collision this turn.
    pub collisions: Vec<u32>,
}

impl MetricsSeries {
    pub fn len(&self) -> usize {
        self.expected_gain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expected_gain.is_empty()
    }

    pub fn final_regret(&self) -> f64 {
        self.cumulative_regret.last().copied().unwrap_or(0.0)
    }

    pub fn total_expected_gain(&self) -> f64 {
        self.expected_gain.iter().sum()
    }

    pub fn total_realized_gain(&self) -> u64 {
        self.realized_gain.iter().map(|&g| u64::from(g)).sum()
    }
}

/// Turns [`TurnRecord`]s into regret increments.
///
/// Pulled means are summed best-first, the same order [`top_n_sum`] uses, so
/// a turn that covers exactly the top N arms reproduces the benchmark bit for
/// bit and per-turn regret is never negative.
#[derive(Debug, Clone)]
pub(crate) struct RegretAccountant {
    means: Vec<f64>,
    order: Vec<usize>,
    benchmark: f64,
    cumulative: f64,
}

impl RegretAccountant {
    pub fn new(arms: &ArmSet, n_players: usize) -> Result<Self> {
        Ok(Self {
            means: arms.means().to_vec(),
            order: arms.descending_order(),
            benchmark: top_n_sum(arms.means(), n_players)?,
            cumulative: 0.0,
        })
    }

    pub fn record(&mut self, record: &TurnRecord, series: &mut MetricsSeries) {
        let gain: f64 = self
            .order
            .iter()
            .filter(|&&i| record.pulled[i])
            .map(|&i| self.means[i])
            .sum();
        self.cumulative += self.benchmark - gain;
        series.expected_gain.push(gain);
        series.realized_gain.push(record.realized_gain());
        series.cumulative_regret.push(self.cumulative);
        series.collisions.push(record.collisions() as u32);
    }
}

/// Per-turn mean and sample standard deviation across replications.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Band {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Band {
    fn from_columns<F>(series: &[MetricsSeries], turns: usize, value: F) -> Self
    where
        F: Fn(&MetricsSeries, usize) -> f64,
    {
        let (mean, std) = (0..turns)
            .map(|k| mean_std(series.iter().map(|s| value(s, k))))
            .unzip();
        Self { mean, std }
    }
}

/// Mean and sample standard deviation (zero for fewer than two values).
pub fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// Cross-replication summary of an experiment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Aggregate {
    pub replications: usize,
    pub expected_gain: Band,
    pub realized_gain: Band,
    pub cumulative_regret: Band,
    pub collisions: Band,
    pub final_regret_mean: f64,
    pub final_regret_std: f64,
}

impl Aggregate {
    pub fn turns(&self) -> usize {
        self.cumulative_regret.mean.len()
    }
}

/// Aggregates replications turn by turn. All series must share a length.
///
/// Each statistic is reduced in replication order, so the result does not
/// depend on how the replications were scheduled.
pub fn aggregate(series: &[MetricsSeries]) -> Aggregate {
    let turns = series.iter().map(MetricsSeries::len).min().unwrap_or(0);
    debug_assert!(series.iter().all(|s| s.len() == turns));
    let (final_regret_mean, final_regret_std) = mean_std(series.iter().map(MetricsSeries::final_regret));
    Aggregate {
        replications: series.len(),
        expected_gain: Band::from_columns(series, turns, |s, k| s.expected_gain[k]),
        realized_gain: Band::from_columns(series, turns, |s, k| f64::from(s.realized_gain[k])),
        cumulative_regret: Band::from_columns(series, turns, |s, k| s.cumulative_regret[k]),
        collisions: Band::from_columns(series, turns, |s, k| f64::from(s.collisions[k])),
        final_regret_mean,
        final_regret_std,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_small_cases() {
        assert_eq!(mean_std([3.0].into_iter()), (3.0, 0.0));
        let (m, s) = mean_std([1.0, 2.0, 3.0, 4.0].into_iter());
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exact_top_n_turn_has_zero_regret() {
        let arms = ArmSet::new(vec![0.3, 0.7, 0.1, 0.9]).unwrap();
        let mut acc = RegretAccountant::new(&arms, 2).unwrap();
        let mut series = MetricsSeries::default();
        let record = TurnRecord {
            choices: vec![3, 1],
            winners: vec![None, Some(1), None, Some(0)],
            player_rewards: vec![1, 0],
            pulled: vec![false, true, false, true],
        };
        for _ in 0..1000 {
            acc.record(&record, &mut series);
        }
        assert!(series.cumulative_regret.iter().all(|&r| r == 0.0));
        assert_eq!(series.total_realized_gain(), 1000);
    }
}
