//! Library side of the `ksrd` command-line tool: run records, the
//! subcommand implementations, and the bench harness.

pub mod args;
pub mod bench;
pub mod record;
pub mod solve;
pub mod verify;

pub use record::{RunRecord, Summary};

use std::path::Path;

use anyhow::Context;
use ksrd::instances::parse_edge_list;
use ksrd::Graph;

pub fn load_instance(path: &Path) -> anyhow::Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read instance {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("cannot parse instance {}", path.display()))
}

/// Instance name used in records: the file stem.
pub fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Default wall-clock limit by instance size: 300 s below 30 nodes, 600 s
/// below 100, 1200 s otherwise.
pub fn default_time_limit(n: usize) -> f64 {
    match n {
        0..=29 => 300.0,
        30..=99 => 600.0,
        _ => 1200.0,
    }
}
