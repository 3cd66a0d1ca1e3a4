//! Scenario-runner behaviour: the shipped scenario files pass, repeated runs
//! are deterministic, and a dropped federation releases its processes.

use fedfaas_harness::federation::{Federation, SiteSpec};
use fedfaas_harness::scenario::{parse_scenario, run_scenario};
use std::path::PathBuf;

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run_file(name: &str) -> fedfaas_harness::scenario::ScenarioReport {
    let text = std::fs::read_to_string(scenario_path(name)).expect("scenario file readable");
    let spec = parse_scenario(&text).expect("scenario parses");
    run_scenario(&spec).expect("scenario runs")
}

#[test]
fn single_site_scenario_passes() {
    let report = run_file("single-site.yaml");
    assert!(report.passed, "report: {report:?}");
    assert_eq!(report.cross_site_forwards, 0);
}

#[test]
fn revocation_scenario_passes() {
    let report = run_file("revocation.yaml");
    assert!(report.passed, "report: {report:?}");
    // the revoke step flips the same invocation from 200 to 403 and back
    assert_eq!(report.steps.len(), 5);
}

#[test]
fn repeated_runs_are_deterministic() {
    let first = run_file("single-site.yaml");
    let second = run_file("single-site.yaml");
    assert_eq!(
        serde_json::to_string(&first).unwrap(),
        serde_json::to_string(&second).unwrap()
    );
}

#[test]
fn dropping_the_federation_stops_its_services() {
    let sites = vec![SiteSpec { site_id: "espsrc".into(), functions: vec!["gaussconv".into()] }];
    let fed = Federation::start(&sites, &[]).expect("federation starts");
    let gk_port = fed.sites()[0].gatekeeper_port;
    assert!(std::net::TcpStream::connect(("127.0.0.1", gk_port)).is_ok());
    drop(fed);
    // the child is killed and reaped on drop; the listener must be gone
    let mut alive = true;
    for _ in 0..50 {
        if std::net::TcpStream::connect(("127.0.0.1", gk_port)).is_err() {
            alive = false;
            break;
        }
        std::thread::sleep(std::time::Duration::from_millis(100));
    }
    assert!(!alive, "gatekeeper port {gk_port} still accepting after drop");
}

#[test]
fn malformed_scenario_is_rejected() {
    assert!(parse_scenario("sites: 3").is_err());
    assert!(parse_scenario("steps: []").is_err());
}
