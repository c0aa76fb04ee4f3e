use std::io::Write;

use commbandit::allocation::{
    brute_force_allocation, expected_turn_gain, expected_turn_loss, optimal_allocation,
};
use commbandit::sim::run_experiment;

use crate::config::{parse_means, RunSpec};
use crate::error::{CliError, Result};
use crate::output::{CsvFile, AGGREGATE_HEADER, SWEEP_HEADER, TURNS_HEADER};

/// Per-turn and aggregate CSVs for a single connectivity.
pub fn run(spec: &RunSpec, log: &mut dyn Write) -> Result<()> {
    let [alpha] = spec.alphas[..] else {
        return Err(CliError::usage(format!(
            "run takes exactly one alpha, got {}; use sweep-alpha for several",
            spec.alphas.len()
        )));
    };
    let configs: Vec<_> = spec.policies.iter().map(|&p| spec.experiment(p, alpha)).collect();
    for c in &configs {
        c.validate()?;
    }

    let agg_path = spec.aggregate_path();
    let mut turns = CsvFile::create(&spec.out, TURNS_HEADER)?;
    let mut agg = CsvFile::create(&agg_path, AGGREGATE_HEADER)?;
    for config in &configs {
        let name = config.policy.kind.name();
        let result = run_experiment(config)?;
        turns.write_turns(name, alpha, &result.series, spec.log_every)?;
        agg.write_aggregate(name, alpha, &result.aggregate)?;
        let _ = writeln!(
            log,
            "{name} alpha={alpha}: final regret {:.3} ± {:.3} over {} replications",
            result.aggregate.final_regret_mean, result.aggregate.final_regret_std, config.replications
        );
    }
    turns.finish()?;
    agg.finish()?;
    let _ = writeln!(log, "wrote {} and {}", spec.out.display(), agg_path.display());
    Ok(())
}

/// Final-regret summary for every (policy, alpha) pair.
pub fn sweep_alpha(spec: &RunSpec, log: &mut dyn Write) -> Result<()> {
    let mut configs = Vec::new();
    for &policy in &spec.policies {
        for &alpha in &spec.alphas {
            let c = spec.experiment(policy, alpha);
            c.validate()?;
            configs.push(c);
        }
    }
    let mut out = CsvFile::create(&spec.out, SWEEP_HEADER)?;
    for config in &configs {
        let name = config.policy.kind.name();
        let result = run_experiment(config)?;
        out.write_sweep_row(name, config.alpha, &result.aggregate)?;
        let _ = writeln!(
            log,
            "{name} alpha={}: final regret {:.3} ± {:.3}",
            config.alpha, result.aggregate.final_regret_mean, result.aggregate.final_regret_std
        );
    }
    out.finish()?;
    let _ = writeln!(log, "wrote {}", spec.out.display());
    Ok(())
}

const ORACLE_MAX_ARMS: usize = 4;
const ORACLE_STEP: f64 = 0.01;

/// Prints the closed-form allocation and, for small instances, the lattice
/// oracle next to it.
pub fn validate_allocation(mu: &str, n_players: usize, out: &mut dyn Write) -> Result<()> {
    let means = parse_means(mu).map_err(|e| CliError::usage(format!("--mu: {e}")))?;
    if let Some(m) = means.iter().find(|m| !(**m > 0.0 && **m <= 1.0)) {
        return Err(CliError::usage(format!("--mu: {m} is outside (0, 1]")));
    }
    if means.is_empty() || n_players == 0 {
        return Err(CliError::usage("--mu and --players must be non-empty and positive"));
    }

    let alloc = optimal_allocation(&means, n_players)?;
    let loss = expected_turn_loss(&means, &alloc.probabilities, n_players)?;
    let gain = expected_turn_gain(&means, &alloc.probabilities, n_players)?;
    let discarded: Vec<usize> = (0..means.len()).filter(|&i| !alloc.is_active(i)).collect();

    let w = |e| CliError::io("<stdout>", e);
    writeln!(out, "arms: {}, players: {n_players}", means.len()).map_err(w)?;
    writeln!(out, "active arms: {}", arm_list(&alloc.active)).map_err(w)?;
    writeln!(out, "discarded arms: {}", arm_list(&discarded)).map_err(w)?;
    writeln!(out, "c = {}", vector(&alloc.probabilities)).map_err(w)?;
    writeln!(out, "A = {:.6}", alloc.equalized).map_err(w)?;
    writeln!(out, "expected loss per turn: {loss:.6}").map_err(w)?;
    writeln!(out, "expected gain per turn: {gain:.6}").map_err(w)?;
    if means.len() <= ORACLE_MAX_ARMS {
        let (oracle, oracle_loss) = brute_force_allocation(&means, n_players, ORACLE_STEP)?;
        writeln!(
            out,
            "brute force (step {ORACLE_STEP}): c = {}, loss {oracle_loss:.6}, closed form minus oracle {:+.3e}",
            vector(&oracle),
            loss - oracle_loss
        )
        .map_err(w)?;
    }
    Ok(())
}

fn arm_list(arms: &[usize]) -> String {
    if arms.is_empty() {
        return "none".into();
    }
    let labels: Vec<String> = arms.iter().map(|a| (a + 1).to_string()).collect();
    labels.join(", ")
}

fn vector(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", parts.join(", "))
}
