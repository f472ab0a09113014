use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cli::Command;
use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Formats a total time for file names: `1`, `0.5`, `10`.
pub fn time_tag(total_time: f64) -> String {
    format!("{total_time}")
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<(), CliError> {
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(path, source),
        other => CliError::Malformed {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    };
    let mut writer = csv::Writer::from_path(path).map_err(io)?;
    for row in rows {
        writer.serialize(row).map_err(io)?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
}

/// Outcome of one independent run in a sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunEntry {
    pub label: String,
    pub n: usize,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none", default)]
    pub total_time: Option<f64>,
    pub seed: u64,
    pub status: RunStatus,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Written beside every experiment's CSVs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    /// The subcommand with its arguments exactly as parsed; `rerun` replays it.
    pub command: Command,
    /// Resolved settings after defaults and grid expansion.
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub parallelism: usize,
    pub wall_time_seconds: f64,
    pub runs: Vec<RunEntry>,
    /// Aggregate files written after all runs.
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn failed(&self) -> usize {
        self.runs.iter().filter(|r| r.status == RunStatus::Failed).count()
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST_NAME);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        write_text(&path, &(text + "\n"))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}
