//! Pipeline wiring for the `colad` command-line tool.

pub mod artifacts;
pub mod config;
pub mod error;
pub mod pipeline;

pub use config::{ConfigFile, RunConfig};
pub use error::{CliError, Result};
pub use pipeline::{run_pipeline, Stage};

use colad_core::{generate, SynthConfig};

use artifacts::ArtifactDir;

pub const SYNTH_SERIES: &str = "series.csv";
pub const SYNTH_LABELS: &str = "labels.csv";

pub fn load_synth_config(text: &str) -> Result<SynthConfig> {
    toml::from_str(text).map_err(|e| CliError::InvalidConfig(e.message().to_string()))
}

/// Generate a labeled synthetic series into `series.csv` and `labels.csv`.
pub fn cmd_synth(config: &SynthConfig, out: &ArtifactDir) -> Result<()> {
    config
        .validate()
        .map_err(|e| CliError::InvalidConfig(e.to_string()))?;
    let labeled = generate(config)?;
    out.write(SYNTH_SERIES, &labeled.series.to_csv())?;
    out.write(SYNTH_LABELS, &labeled.labels_csv())?;
    Ok(())
}
