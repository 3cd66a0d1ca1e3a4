//! Core building blocks for a federated function-as-a-service testbed:
//! token identity, IVOA identifiers and a replica catalogue, a FITS subset
//! codec, the Gaussian convolution engine, the authorization policy store,
//! gatekeeper routing, the site registry, and DataLink discovery.

pub mod catalogue;
pub mod datalink;
pub mod fits;
pub mod gatekeeper;
pub mod gauss;
pub mod identity;
pub mod ivoid;
pub mod permissions;
pub mod sitecaps;
