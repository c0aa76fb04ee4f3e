//! Run settings: a flat `key = value` file overlaid with command-line flags.
//!
//! Recognized keys: `arms`, `players`, `means`, `alpha`, `policy`,
//! `epsilon`, `epsilon_decay`, `turns`, `replications`, `seed`, `out`,
//! `log_every`. Blank lines and lines starting with `#` are skipped.
//! `means` takes a comma-separated list or `preset:mu1` / `preset:mu2`;
//! `alpha` and `policy` take comma-separated lists.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use commbandit::policies::ExplorationSchedule;
use commbandit::sim::{DEFAULT_REPLICATIONS, DEFAULT_TURNS};
use commbandit::{presets, ArmSet, ExperimentConfig, PolicyKind, PolicySpec};

use crate::error::{CliError, Result};

pub const KEYS: [&str; 12] = [
    "arms",
    "players",
    "means",
    "alpha",
    "policy",
    "epsilon",
    "epsilon_decay",
    "turns",
    "replications",
    "seed",
    "out",
    "log_every",
];

/// Directory used for output files when `out` is not given.
pub const OUT_DIR_ENV: &str = "COMMBANDIT_OUT_DIR";

/// Raw, unvalidated settings keyed by config key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut settings = Settings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected 'key = value', got '{line}'", n + 1))
            })?;
            settings.set(key.trim(), value.trim())?;
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(CliError::usage(format!("unknown config key '{key}'")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Values in `other` win.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| invalid(key, raw)),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str, default: &str) -> Result<Vec<T>> {
        let raw = self.get(key).unwrap_or(default);
        let items: Vec<T> = raw
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| invalid(key, raw)))
            .collect::<Result<_>>()?;
        Ok(items)
    }

    /// Validates every value and fills in defaults.
    pub fn resolve(&self, default_file: &str) -> Result<RunSpec> {
        let means = match self.get("means") {
            None => presets::MU1.to_vec(),
            Some(raw) => parse_means(raw).map_err(|_| invalid("means", raw))?,
        };
        let arms = ArmSet::new(means).map_err(|e| CliError::usage(format!("config key 'means': {e}")))?;
        if let Some(raw) = self.get("arms") {
            let s: usize = raw.parse().map_err(|_| invalid("arms", raw))?;
            if s != arms.len() {
                return Err(CliError::usage(format!(
                    "config key 'arms': {s} arms declared but 'means' lists {}",
                    arms.len()
                )));
            }
        }

        let alphas: Vec<f64> = self.list("alpha", "0")?;
        if let Some(a) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(CliError::usage(format!("config key 'alpha': {a} is outside [0, 1]")));
        }

        let epsilon: f64 = self.parsed("epsilon", 1.0)?;
        let decay: f64 = self.parsed("epsilon_decay", ExplorationSchedule::DEFAULT_DECAY)?;
        ExplorationSchedule::new(epsilon, decay).map_err(|e| CliError::usage(e.to_string()))?;
        let kinds: Vec<PolicyKind> = self.list("policy", "thompson")?;
        let policies = kinds
            .into_iter()
            .map(|k| PolicySpec::new(k).with_initial_epsilon(epsilon).with_decay(decay))
            .collect();

        let log_every: u64 = self.parsed("log_every", 1)?;
        if log_every == 0 {
            return Err(invalid("log_every", "0"));
        }

        let out = match self.get("out") {
            Some(p) => PathBuf::from(p),
            None => std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_default()
                .join(default_file),
        };

        Ok(RunSpec {
            arms,
            n_players: self.parsed("players", 5)?,
            alphas,
            policies,
            turns: self.parsed("turns", DEFAULT_TURNS)?,
            replications: self.parsed("replications", DEFAULT_REPLICATIONS)?,
            seed: self.parsed("seed", 0)?,
            out,
            log_every,
        })
    }
}

fn invalid(key: &str, raw: &str) -> CliError {
    CliError::usage(format!("config key '{key}': invalid value '{raw}'"))
}

/// Comma-separated reals, or `preset:<name>`.
pub fn parse_means(raw: &str) -> std::result::Result<Vec<f64>, String> {
    if let Some(name) = raw.trim().strip_prefix("preset:") {
        return presets::by_name(name.trim())
            .map(<[f64]>::to_vec)
            .ok_or_else(|| format!("unknown preset '{name}'"));
    }
    raw.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number")))
        .collect()
}

/// A fully validated invocation: one world, one or more policies and
/// connectivities.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub arms: ArmSet,
    pub n_players: usize,
    pub alphas: Vec<f64>,
    pub policies: Vec<PolicySpec>,
    pub turns: u64,
    pub replications: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub log_every: u64,
}

impl RunSpec {
    pub fn experiment(&self, policy: PolicySpec, alpha: f64) -> ExperimentConfig {
        ExperimentConfig {
            arms: self.arms.clone(),
            n_players: self.n_players,
            alpha,
            policy,
            turns: self.turns,
            replications: self.replications,
            base_seed: self.seed,
        }
    }

    /// `run.csv` → `run.agg.csv`.
    pub fn aggregate_path(&self) -> PathBuf {
        let stem = self
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        self.out.with_file_name(format!("{stem}.agg.csv"))
    }
}
