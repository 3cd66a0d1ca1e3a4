//! Multi-service daemon: one subcommand per service, one service per process.

use clap::{Parser, Subcommand};
use fedfaas_core::gatekeeper::load_config;
use fedfaas_core::permissions::PolicyStore;
use fedfaas_services::gatekeeper_svc::GatekeeperState;
use fedfaas_services::runtime::RuntimeConfig;
use fedfaas_services::util::{bind_and_announce, load_key_file};
use fedfaas_services::{catalogue_svc, datalink_svc, gatekeeper_svc, iam, permissions_svc, runtime, sitecaps_svc};
use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "fedfaasd", about = "federated FaaS testbed services")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mock IAM token issuer
    Iam {
        #[arg(long, default_value_t = 0)]
        port: u16,
        #[arg(long)]
        key_file: PathBuf,
    },
    /// Replica catalogue
    Catalogue {
        #[arg(long, default_value_t = 0)]
        port: u16,
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Permissions API with the gaussconv extraction plugin
    Permissions {
        #[arg(long, default_value_t = 0)]
        port: u16,
        /// Tab-separated rules file: group, namespace, function_uuid, effect
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Site-capabilities registry
    Sitecaps {
        #[arg(long, default_value_t = 0)]
        port: u16,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// DataLink discovery service
    Datalink {
        #[arg(long, default_value_t = 0)]
        port: u16,
        #[arg(long)]
        catalogue_url: String,
        #[arg(long)]
        sitecaps_url: String,
    },
    /// Per-site function runtime (gaussconv)
    Runtime {
        #[arg(long, default_value_t = 0)]
        port: u16,
        /// Storage mount root; falls back to env ABS_PATH, then /data
        #[arg(long)]
        abs_path: Option<PathBuf>,
        #[arg(long, default_value = "local")]
        site_id: String,
    },
    /// Per-site gatekeeper
    Gatekeeper {
        #[arg(long, default_value_t = 0)]
        port: u16,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        permissions_url: String,
        #[arg(long)]
        key_file: PathBuf,
        #[arg(long)]
        sitecaps_url: Option<String>,
        /// route=internal_path overrides for the path rewrite
        #[arg(long = "rewrite")]
        rewrites: Vec<String>,
        /// namespace/service_name=host:port overrides for upstream resolution
        #[arg(long = "resolve")]
        resolves: Vec<String>,
        #[arg(long, default_value_t = 300)]
        timeout_secs: u64,
    },
}

fn parse_pairs(pairs: &[String], flag: &str) -> HashMap<String, String> {
    pairs
        .iter()
        .filter_map(|p| {
            let split = p.split_once('=');
            if split.is_none() {
                eprintln!("ignoring malformed --{flag} '{p}', expected key=value");
            }
            split.map(|(k, v)| (k.to_string(), v.to_string()))
        })
        .collect()
}

fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
    if let Err(e) = rt.block_on(run(cli.command)) {
        eprintln!("fedfaasd: {e}");
        std::process::exit(1);
    }
}

async fn run(command: Command) -> Result<(), String> {
    let (component, port, app): (&str, u16, axum::Router) = match command {
        Command::Iam { port, key_file } => {
            let key = load_key_file(&key_file)?;
            ("iam", port, iam::router(key))
        }
        Command::Catalogue { port, snapshot } => {
            ("catalogue", port, catalogue_svc::router(snapshot))
        }
        Command::Permissions { port, rules } => {
            let store = match rules {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("read {path:?}: {e}"))?;
                    PolicyStore::load_rules(&text).map_err(|e| e.to_string())?
                }
                None => PolicyStore::new(),
            };
            ("permissions", port, permissions_svc::router(store))
        }
        Command::Sitecaps { port, log } => ("sitecaps", port, sitecaps_svc::router(log)),
        Command::Datalink { port, catalogue_url, sitecaps_url } => {
            ("datalink", port, datalink_svc::router(catalogue_url, sitecaps_url))
        }
        Command::Runtime { port, abs_path, site_id } => {
            let abs_path = abs_path
                .or_else(|| std::env::var("ABS_PATH").ok().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("/data"));
            if !abs_path.is_dir() {
                return Err(format!("storage mount {} is not a readable directory", abs_path.display()));
            }
            ("runtime", port, runtime::router(RuntimeConfig { abs_path, site_id }))
        }
        Command::Gatekeeper {
            port,
            config,
            permissions_url,
            key_file,
            sitecaps_url,
            rewrites,
            resolves,
            timeout_secs,
        } => {
            let doc = std::fs::read(&config).map_err(|e| format!("read {config:?}: {e}"))?;
            let parsed = load_config(&doc).map_err(|e| e.to_string())?;
            let key = load_key_file(&key_file)?;
            let state = GatekeeperState::new(
                parsed,
                Some(config),
                key,
                permissions_url,
                sitecaps_url,
                parse_pairs(&rewrites, "rewrite"),
                parse_pairs(&resolves, "resolve"),
                Duration::from_secs(timeout_secs),
            );
            ("gatekeeper", port, gatekeeper_svc::router(state))
        }
    };
    let listener = bind_and_announce(port, component).await.map_err(|e| e.to_string())?;
    axum::serve(listener, app).await.map_err(|e| e.to_string())
}
