//! Command-line layer of the hybrid dynamics laboratory: configuration
//! parsing, preset sweeps, CSV/JSON output and the verification suites.

pub mod config;
pub mod output;
pub mod preset;
pub mod run;
pub mod verify;

use std::path::PathBuf;

/// Output directory resolution: explicit flag, then QCH_LAB_OUT, then ./out.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("QCH_LAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}
