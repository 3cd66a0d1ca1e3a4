//! End-user client: login, discover links, invoke the Gaussian convolution
//! through a gatekeeper URL discovered via DataLink, save the FITS result.
//!
//! Exit codes: 0 ok, 2 connectivity/parse, 3 no session, 4 no eligible
//! site, 5 server rejection, 6 ambiguous dataset.

mod votable;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CONNECTIVITY: u8 = 2;
const EXIT_NO_SESSION: u8 = 3;
const EXIT_NO_SITE: u8 = 4;
const EXIT_SERVER_REJECTION: u8 = 5;
const EXIT_AMBIGUOUS: u8 = 6;

#[derive(Parser)]
#[command(name = "fedfaas", about = "client for the federated FaaS testbed")]
struct Cli {
    /// Session file location
    #[arg(long, env = "FEDFAAS_SESSION_FILE")]
    session_file: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Authenticate against the mock IAM and store a session
    Login {
        #[arg(long, env = "FEDFAAS_IAM_URL")]
        iam_url: String,
        #[arg(long, env = "FEDFAAS_DATALINK_URL")]
        datalink_url: String,
        #[arg(long, env = "FEDFAAS_CATALOGUE_URL")]
        catalogue_url: String,
        #[arg(long, env = "FEDFAAS_SITECAPS_URL", default_value = "")]
        sitecaps_url: String,
        #[arg(long)]
        subject: String,
        /// Group memberships, repeatable
        #[arg(long = "group")]
        groups: Vec<String>,
        #[arg(long, default_value_t = 3600)]
        ttl_seconds: u64,
    },
    /// List the services available for a dataset
    Links { ivoid: String },
    /// Run the Gaussian convolution on a dataset and save the FITS result
    Gaussconv {
        #[arg(long)]
        namespace: String,
        #[arg(long)]
        name: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Serialize, Deserialize)]
struct Session {
    token: String,
    datalink_url: String,
    catalogue_url: String,
    sitecaps_url: String,
}

fn session_path(cli_path: &Option<PathBuf>) -> PathBuf {
    if let Some(p) = cli_path {
        return p.clone();
    }
    let home = std::env::var("HOME").unwrap_or_else(|_| ".".into());
    PathBuf::from(home).join(".fedfaas").join("session")
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("fedfaas: {message}");
    ExitCode::from(code)
}

fn load_session(path: &PathBuf) -> Result<Session, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|_| fail(EXIT_NO_SESSION, "not logged in (run `fedfaas login` first)"))?;
    serde_json::from_str(&text)
        .map_err(|_| fail(EXIT_NO_SESSION, "session file unreadable; log in again"))
}

fn write_session(path: &PathBuf, session: &Session) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(session)?)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        std::fs::set_permissions(path, std::fs::Permissions::from_mode(0o600))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let session_file = session_path(&cli.session_file);
    let http = reqwest::blocking::Client::new();
    match cli.command {
        Command::Login {
            iam_url,
            datalink_url,
            catalogue_url,
            sitecaps_url,
            subject,
            groups,
            ttl_seconds,
        } => {
            let resp = http
                .post(format!("{}/token", iam_url.trim_end_matches('/')))
                .json(&serde_json::json!({
                    "subject": subject, "groups": groups, "ttl_seconds": ttl_seconds
                }))
                .send();
            let resp = match resp {
                Ok(r) => r,
                Err(e) => return fail(EXIT_CONNECTIVITY, format!("IAM unreachable: {e}")),
            };
            if !resp.status().is_success() {
                return fail(EXIT_CONNECTIVITY, format!("IAM refused login: {}", resp.status()));
            }
            let body: serde_json::Value = match resp.json() {
                Ok(b) => b,
                Err(e) => return fail(EXIT_CONNECTIVITY, format!("bad IAM response: {e}")),
            };
            let Some(token) = body["token"].as_str() else {
                return fail(EXIT_CONNECTIVITY, "bad IAM response: no token field");
            };
            let session = Session {
                token: token.to_string(),
                datalink_url: datalink_url.trim_end_matches('/').to_string(),
                catalogue_url: catalogue_url.trim_end_matches('/').to_string(),
                sitecaps_url: sitecaps_url.trim_end_matches('/').to_string(),
            };
            if let Err(e) = write_session(&session_file, &session) {
                return fail(EXIT_CONNECTIVITY, format!("cannot write session: {e}"));
            }
            println!("logged in as {subject}");
            ExitCode::SUCCESS
        }
        Command::Links { ivoid } => {
            let session = match load_session(&session_file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            if fedfaas_core::ivoid::parse_ivoid(&ivoid).is_err() {
                return fail(EXIT_CONNECTIVITY, format!("malformed ivo identifier: {ivoid}"));
            }
            let xml = match http
                .get(format!("{}/links", session.datalink_url))
                .query(&[("ID", &ivoid)])
                .send()
                .and_then(|r| r.error_for_status())
                .and_then(|r| r.text())
            {
                Ok(t) => t,
                Err(e) => return fail(EXIT_CONNECTIVITY, format!("datalink query failed: {e}")),
            };
            let rows = votable::parse_links(&xml);
            println!("{:<16} {:<40} params", "function", "access_url");
            for row in rows {
                let params: Vec<String> = row
                    .input_params
                    .iter()
                    .filter(|(n, _)| n != "ID")
                    .map(|(n, v)| format!("{n}={v}"))
                    .collect();
                println!("{:<16} {:<40} {}", row.function_name, row.access_url, params.join(" "));
            }
            ExitCode::SUCCESS
        }
        Command::Gaussconv { namespace, name, sigma, output } => {
            let session = match load_session(&session_file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            // 1. resolve the dataset identifier from (namespace, name)
            let replicas: Vec<serde_json::Value> = match http
                .get(format!("{}/replicas", session.catalogue_url))
                .query(&[("namespace", &namespace), ("name", &name)])
                .send()
                .and_then(|r| r.error_for_status())
                .and_then(|r| r.json())
            {
                Ok(r) => r,
                Err(e) => return fail(EXIT_CONNECTIVITY, format!("catalogue query failed: {e}")),
            };
            let mut ivoids: Vec<String> = replicas
                .iter()
                .filter_map(|r| r["ivo"].as_str().map(|s| s.to_string()))
                .collect();
            ivoids.sort();
            ivoids.dedup();
            let ivo = match ivoids.len() {
                0 => return fail(EXIT_NO_SITE, "no eligible site: dataset has no replica"),
                1 => ivoids.pop().unwrap(),
                _ => {
                    return fail(
                        EXIT_AMBIGUOUS,
                        format!(
                            "ambiguous dataset ({namespace}, {name}); candidates: {}",
                            ivoids.join(", ")
                        ),
                    )
                }
            };
            // 2. discover the data-proximate invocation URL
            let xml = match http
                .get(format!("{}/links", session.datalink_url))
                .query(&[("ID", &ivo)])
                .send()
                .and_then(|r| r.error_for_status())
                .and_then(|r| r.text())
            {
                Ok(t) => t,
                Err(e) => return fail(EXIT_CONNECTIVITY, format!("datalink query failed: {e}")),
            };
            let rows = votable::parse_links(&xml);
            let Some(link) = rows.iter().find(|r| r.function_name == "gaussconv") else {
                return fail(EXIT_NO_SITE, "no eligible site: no gaussconv link for this dataset");
            };
            // 3. invoke through the gatekeeper only
            let resp = match http
                .post(&link.access_url)
                .bearer_auth(&session.token)
                .json(&serde_json::json!({"ivo": ivo, "sigma": sigma}))
                .send()
            {
                Ok(r) => r,
                Err(e) => return fail(EXIT_CONNECTIVITY, format!("invocation failed: {e}")),
            };
            if !resp.status().is_success() {
                let status = resp.status();
                let detail = resp
                    .json::<serde_json::Value>()
                    .ok()
                    .map(|b| {
                        format!(
                            "{}: {}",
                            b["error_code"].as_str().unwrap_or("error"),
                            b["message"].as_str().unwrap_or("")
                        )
                    })
                    .unwrap_or_default();
                let hint = if status.as_u16() == 401 { " (session may be expired; log in again)" } else { "" };
                return fail(EXIT_SERVER_REJECTION, format!("server rejected ({status}) {detail}{hint}"));
            }
            // 4. save the result
            let bytes = match resp.bytes() {
                Ok(b) => b,
                Err(e) => return fail(EXIT_CONNECTIVITY, format!("reading response failed: {e}")),
            };
            if let Some(dir) = output.parent() {
                if !dir.as_os_str().is_empty() {
                    if let Err(e) = std::fs::create_dir_all(dir) {
                        return fail(EXIT_CONNECTIVITY, format!("cannot create {dir:?}: {e}"));
                    }
                }
            }
            if let Err(e) = std::fs::write(&output, &bytes) {
                return fail(EXIT_CONNECTIVITY, format!("cannot write {output:?}: {e}"));
            }
            println!("wrote {} bytes to {}", bytes.len(), output.display());
            ExitCode::SUCCESS
        }
    }
}
