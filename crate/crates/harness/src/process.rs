//! Child-process management for the spawned services: locate the daemon
//! binary, wait for its LISTENING handshake, and kill on drop.

use std::io::{BufRead, BufReader};
use std::path::PathBuf;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpawnError {
    #[error("scenario aborted: {component} failed to start: {message}")]
    ScenarioAborted { component: String, message: String },
}

pub fn locate_binary(name: &str) -> PathBuf {
    let env_key = format!("{}_BIN", name.replace('-', "_").to_uppercase());
    if let Ok(p) = std::env::var(&env_key) {
        return PathBuf::from(p);
    }
    if let Ok(exe) = std::env::current_exe() {
        for dir in exe.ancestors().skip(1) {
            let candidate = dir.join(name);
            if candidate.is_file() {
                return candidate;
            }
        }
    }
    PathBuf::from(name)
}

pub struct ChildGuard {
    pub component: String,
    pub port: u16,
    child: Child,
}

impl Drop for ChildGuard {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Spawn a fedfaasd subcommand with --port 0 and read the announced port.
pub fn spawn_service(component: &str, args: &[String]) -> Result<ChildGuard, SpawnError> {
    let bin = locate_binary("fedfaasd");
    let abort = |message: String| SpawnError::ScenarioAborted {
        component: component.to_string(),
        message,
    };
    let mut child = Command::new(&bin)
        .args(args)
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| abort(format!("spawn {bin:?}: {e}")))?;
    let stdout = child.stdout.take().expect("stdout piped");
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let mut reader = BufReader::new(stdout);
        let mut line = String::new();
        let _ = reader.read_line(&mut line);
        let _ = tx.send(line);
        // keep draining so the child never blocks on a full pipe
        let mut line = String::new();
        loop {
            line.clear();
            match reader.read_line(&mut line) {
                Ok(0) | Err(_) => break,
                Ok(_) => {}
            }
        }
    });
    let deadline = Instant::now() + Duration::from_secs(15);
    let line = loop {
        match rx.recv_timeout(Duration::from_millis(100)) {
            Ok(l) => break l,
            Err(std::sync::mpsc::RecvTimeoutError::Timeout) => {
                if let Ok(Some(status)) = child.try_wait() {
                    return Err(abort(format!("exited early with {status}")));
                }
                if Instant::now() > deadline {
                    let _ = child.kill();
                    return Err(abort("no LISTENING line within 15s".into()));
                }
            }
            Err(e) => {
                let _ = child.kill();
                return Err(abort(format!("stdout closed: {e}")));
            }
        }
    };
    // "LISTENING <component> <port>"
    let port = line
        .trim()
        .rsplit(' ')
        .next()
        .and_then(|p| p.parse::<u16>().ok())
        .ok_or_else(|| abort(format!("unparsable startup line {line:?}")))?;
    Ok(ChildGuard { component: component.to_string(), port, child })
}
