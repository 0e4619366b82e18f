//! Artifact plumbing shared by the subcommands: deterministic float
//! formatting, output-format selection, and atomic file writes.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// 17 significant digits: round-trips every double and keeps artifact
/// bytes identical across runs.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolves `<dir>/<stem>.<ext>`, creating the directory if needed.
pub fn target_path(dir: &Path, stem: &str, extension: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir.join(format!("{stem}.{extension}")))
}

/// Writes through a sibling temp file and renames into place, so a failed
/// or interrupted run never leaves a partial artifact under the final
/// name.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let mut temp_name = path.as_os_str().to_owned();
    temp_name.push(".tmp");
    let temp = PathBuf::from(temp_name);
    fs::write(&temp, content).with_context(|| format!("writing {}", temp.display()))?;
    fs::rename(&temp, path)
        .with_context(|| format!("moving {} into place", path.display()))?;
    Ok(())
}
