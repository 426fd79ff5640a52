//! Everything behind the `vft` binary: graph specs, builds, bench sweeps,
//! the MIS benchmark, suite manifests and report rendering.

pub mod bench;
pub mod build;
pub mod input;
pub mod misbench;
pub mod report;
pub mod suite;

use serde::Serialize;

/// Pretty JSON with a trailing newline. Field order follows the struct
/// definitions, so equal values print identical bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
