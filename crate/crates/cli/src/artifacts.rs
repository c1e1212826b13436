//! Artifact names and atomic file writes inside the output directory.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub const RAW_SERIES: &str = "raw.csv";
pub const SCALER: &str = "scaler.json";
pub const TRAIN_SERIES: &str = "train.csv";
pub const VALID_SERIES: &str = "valid.csv";
pub const TEST_SERIES: &str = "test.csv";
pub const SUMMARY: &str = "summary.txt";

/// Datasets scored by `detect`, in report order.
pub const DETECT_LABELS: [&str; 2] = ["valid", "test"];

pub fn model(horizons: usize) -> String {
    format!("model_L{horizons}.json")
}

pub fn loss_curve(horizons: usize) -> String {
    format!("loss_L{horizons}.csv")
}

pub fn thresholds(horizons: usize) -> String {
    format!("thresholds_L{horizons}.json")
}

pub fn errors(label: &str, horizons: usize) -> String {
    format!("errors_{label}_L{horizons}.csv")
}

pub fn report_json(label: &str, horizons: usize) -> String {
    format!("report_{label}_L{horizons}.json")
}

pub fn report_text(label: &str, horizons: usize) -> String {
    format!("report_{label}_L{horizons}.txt")
}

pub fn series(label: &str) -> &'static str {
    match label {
        "train" => TRAIN_SERIES,
        "valid" => VALID_SERIES,
        _ => TEST_SERIES,
    }
}

/// A directory of named artifacts.
#[derive(Debug, Clone)]
pub struct ArtifactDir {
    root: PathBuf,
}

impl ArtifactDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn require(&self, name: &str) -> Result<PathBuf> {
        let path = self.path(name);
        if path.is_file() {
            Ok(path)
        } else {
            Err(CliError::MissingArtifact(name.to_string()))
        }
    }

    pub fn read(&self, name: &str) -> Result<String> {
        let path = self.require(name)?;
        fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))
    }

    /// Write to a temporary sibling, then rename over the target.
    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.root).map_err(|e| CliError::io(&self.root, e))?;
        let target = self.path(name);
        let tmp = self.path(&format!(".{name}.tmp"));
        fs::write(&tmp, contents).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, &target).map_err(|e| CliError::io(&target, e))?;
        Ok(target)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}
