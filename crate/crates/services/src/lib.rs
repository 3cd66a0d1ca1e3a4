//! HTTP services for the federated function-as-a-service testbed. Each
//! module builds an axum `Router`; the `fedfaasd` binary serves one of them
//! per process.

pub mod catalogue_svc;
pub mod datalink_svc;
pub mod gatekeeper_svc;
pub mod iam;
pub mod permissions_svc;
pub mod runtime;
pub mod sitecaps_svc;
pub mod util;
