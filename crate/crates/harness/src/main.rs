use clap::{Parser, Subcommand};
use fedfaas_harness::scenario::{parse_scenario, run_scenario};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fedfaas-harness", about = "federated FaaS scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and print a per-step report
    Run {
        scenario: PathBuf,
        /// Overrides the seed in the scenario file
        #[arg(long)]
        seed: Option<u64>,
        /// Write the full report as JSON
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, seed, report } => {
            let text = match std::fs::read_to_string(&scenario) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("read {}: {e}", scenario.display());
                    std::process::exit(2);
                }
            };
            let mut spec = match parse_scenario(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("parse {}: {e}", scenario.display());
                    std::process::exit(2);
                }
            };
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            let outcome = match run_scenario(&spec) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("scenario aborted: {e}");
                    std::process::exit(2);
                }
            };
            for step in &outcome.steps {
                let mark = if step.passed { "PASS" } else { "FAIL" };
                println!("{mark} step {}: {} — {}", step.step, step.description, step.detail);
            }
            println!(
                "{}: {} steps, {} cross-site forwards",
                if outcome.passed { "PASS" } else { "FAIL" },
                outcome.steps.len(),
                outcome.cross_site_forwards
            );
            if let Some(path) = report {
                let json = serde_json::to_string_pretty(&outcome).expect("report serializes");
                if let Err(e) = std::fs::write(&path, json) {
                    eprintln!("write {}: {e}", path.display());
                    std::process::exit(2);
                }
            }
            std::process::exit(if outcome.passed { 0 } else { 1 });
        }
    }
}
