use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cvbandit::harness::{
    bound_params_from_arms, parse_config, run_batch, run_selftest, theoretical_regret_bound,
};

#[derive(Parser)]
#[command(name = "cvbandit", about = "Bandit experiments with side-information", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured (policy x replication) grid and write CSV traces.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's output_dir or ./out.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's replication count.
        #[arg(long)]
        runs: Option<usize>,
        /// Worker thread count; defaults to all cores.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the gap-dependent regret bound for the configured environment.
    Bound {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the Monte-Carlo invariant suite.
    Selftest,
}

fn load_config(path: &PathBuf) -> Result<cvbandit::harness::ExperimentConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            runs,
            workers,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(r) = runs {
                cfg.runs = r;
            }
            let out_dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let result =
                run_batch(&cfg, Some(&out_dir), workers).map_err(|e| e.to_string())?;
            println!("optimal arm: {} (mean {:.6})", result.true_means.optimal, result.true_means.mu_star);
            println!("{:<14} {:>10} {:>14} {:>12} {:>6}", "policy", "checkpoint", "mean_regret", "stderr", "runs");
            for row in &result.summary {
                println!(
                    "{:<14} {:>10} {:>14.4} {:>12.4} {:>6}",
                    row.policy.name(),
                    row.checkpoint,
                    row.mean_regret,
                    row.stderr,
                    row.runs
                );
            }
            println!("wrote CSV traces to {}", out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { config } => {
            let cfg = load_config(&config)?;
            let tm = cvbandit::env::Environment::new(cfg.arms.clone(), cfg.base_seed)
                .true_means(cfg.n_mc);
            let alpha = cfg.policies.first().map(|p| p.alpha).unwrap_or(2.0);
            let params = bound_params_from_arms(
                &cfg.arms,
                &tm.means,
                tm.optimal,
                cfg.bound_c,
                alpha,
                cfg.n_mc,
                cfg.base_seed,
            );
            let b = theoretical_regret_bound(&params, cfg.horizon);
            println!("regret bound at T={}: {b:.4}", cfg.horizon);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let checks = run_selftest();
            let mut all_pass = true;
            for c in &checks {
                println!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
                all_pass &= c.pass;
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
