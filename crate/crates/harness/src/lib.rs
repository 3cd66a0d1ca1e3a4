//! Test-bed orchestration: spawns the federation's services as local
//! processes and drives them with deterministic scenarios.

pub mod federation;
pub mod oracle;
pub mod process;
pub mod scenario;
pub mod synth;
