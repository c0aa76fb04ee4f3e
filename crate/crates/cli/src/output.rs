//! CSV writers. Column layouts are fixed; numbers use Rust's shortest
//! round-trip formatting so identical runs produce identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use commbandit::sim::{Aggregate, MetricsSeries};

use crate::error::{CliError, Result};

pub const TURNS_HEADER: &str =
    "policy,alpha,replication,turn,expected_gain,realized_gain,cumulative_regret,collisions";
pub const AGGREGATE_HEADER: &str = "policy,alpha,turn,replications,\
expected_gain_mean,expected_gain_std,realized_gain_mean,realized_gain_std,\
cumulative_regret_mean,cumulative_regret_std,collisions_mean,collisions_std";
pub const SWEEP_HEADER: &str = "policy,alpha,final_regret_mean,final_regret_std,replications,turns";

/// A CSV file being written, header first.
pub struct CsvFile {
    path: std::path::PathBuf,
    out: BufWriter<File>,
}

impl CsvFile {
    pub fn create(path: &Path, header: &str) -> Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut csv = Self {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        };
        csv.line(format_args!("{header}"))?;
        Ok(csv)
    }

    fn line(&mut self, args: std::fmt::Arguments<'_>) -> Result<()> {
        self.out
            .write_fmt(args)
            .and_then(|_| self.out.write_all(b"\n"))
            .map_err(|e| CliError::io(&self.path, e))
    }

    /// One row per logged turn, replication-major.
    pub fn write_turns(
        &mut self,
        policy: &str,
        alpha: f64,
        series: &[MetricsSeries],
        log_every: u64,
    ) -> Result<()> {
        for (rep, s) in series.iter().enumerate() {
            for k in logged_turns(s.len(), log_every) {
                self.line(format_args!(
                    "{policy},{alpha},{rep},{},{},{},{},{}",
                    k + 1,
                    s.expected_gain[k],
                    s.realized_gain[k],
                    s.cumulative_regret[k],
                    s.collisions[k]
                ))?;
            }
        }
        Ok(())
    }

    pub fn write_aggregate(&mut self, policy: &str, alpha: f64, agg: &Aggregate) -> Result<()> {
        for k in 0..agg.turns() {
            self.line(format_args!(
                "{policy},{alpha},{},{},{},{},{},{},{},{},{},{}",
                k + 1,
                agg.replications,
                agg.expected_gain.mean[k],
                agg.expected_gain.std[k],
                agg.realized_gain.mean[k],
                agg.realized_gain.std[k],
                agg.cumulative_regret.mean[k],
                agg.cumulative_regret.std[k],
                agg.collisions.mean[k],
                agg.collisions.std[k],
            ))?;
        }
        Ok(())
    }

    pub fn write_sweep_row(&mut self, policy: &str, alpha: f64, agg: &Aggregate) -> Result<()> {
        self.line(format_args!(
            "{policy},{alpha},{},{},{},{}",
            agg.final_regret_mean,
            agg.final_regret_std,
            agg.replications,
            agg.turns()
        ))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

/// Zero-based turn indices kept when logging every `every` turns: turns
/// `every, 2·every, …` (1-based) plus the final turn.
pub fn logged_turns(turns: usize, every: u64) -> impl Iterator<Item = usize> {
    let every = every.max(1) as usize;
    (0..turns).filter(move |&k| (k + 1) % every == 0 || k + 1 == turns)
}
