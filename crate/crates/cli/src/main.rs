use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commbandit_cli::commands;
use commbandit_cli::config::{RunSpec, Settings};
use commbandit_cli::Result;

/// Simulate decentralized multiplayer bandits with collisions and random
/// neighbor communication.
#[derive(Parser)]
#[command(name = "commbandit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one connectivity and write per-turn and aggregate CSVs.
    Run(RunArgs),
    /// Run several connectivities and write one final-regret row per (policy, alpha).
    SweepAlpha(RunArgs),
    /// Print the closed-form full-communication allocation for given means.
    ValidateAllocation {
        /// Comma-separated means in (0, 1], or preset:mu1 / preset:mu2.
        #[arg(long)]
        mu: String,
        #[arg(long)]
        players: usize,
    },
}

/// Flags override values from `--config`.
#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    arms: Option<String>,
    #[arg(long)]
    players: Option<String>,
    /// Comma-separated means or preset:mu1 / preset:mu2.
    #[arg(long)]
    means: Option<String>,
    /// Connectivity; comma-separated list for sweep-alpha.
    #[arg(long, visible_alias = "alphas")]
    alpha: Option<String>,
    /// ucb1, egreedy, thompson, asymp_opt or optimal_cycle; comma-separated to compare.
    #[arg(long, visible_alias = "policies")]
    policy: Option<String>,
    /// Initial exploration probability.
    #[arg(long)]
    epsilon: Option<String>,
    /// Per-turn multiplicative exploration decay, in (0, 1).
    #[arg(long)]
    epsilon_decay: Option<String>,
    #[arg(long)]
    turns: Option<String>,
    #[arg(long)]
    replications: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<String>,
    /// Keep every n-th turn in the per-turn CSV (the final turn is always kept).
    #[arg(long)]
    log_every: Option<String>,
}

impl RunArgs {
    fn resolve(&self, default_file: &str) -> Result<RunSpec> {
        let mut settings = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("arms", &self.arms),
            ("players", &self.players),
            ("means", &self.means),
            ("alpha", &self.alpha),
            ("policy", &self.policy),
            ("epsilon", &self.epsilon),
            ("epsilon_decay", &self.epsilon_decay),
            ("turns", &self.turns),
            ("replications", &self.replications),
            ("seed", &self.seed),
            ("out", &self.out),
            ("log_every", &self.log_every),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        settings.overlay(&flags);
        settings.resolve(default_file)
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let mut stderr = io::stderr();
    match cli.command {
        Command::Run(args) => commands::run(&args.resolve("run.csv")?, &mut stderr),
        Command::SweepAlpha(args) => commands::sweep_alpha(&args.resolve("sweep.csv")?, &mut stderr),
        Command::ValidateAllocation { mu, players } => {
            commands::validate_allocation(&mu, players, &mut io::stdout())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
