//! Benchmark harness crate; see `benches/`.

use std::path::PathBuf;
use surgery_core::dsl::{load_script_file, Dataset, Script};

/// Locate the shipped scripts directory relative to the workspace.
pub fn scripts_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

pub fn load(script: &str) -> (Script, Dataset) {
    load_script_file(&scripts_dir().join(script)).expect("shipped script loads")
}
