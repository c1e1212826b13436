//! Run configuration: a flat `key = value` file (TOML syntax) plus CLI overrides.
//!
//! Keys: `input`, `out_dir`, `metric`, `interval_seconds`, `start_time`,
//! `end_time`, `split`, `horizons`, `hidden_size`, `learning_rate`, `epochs`,
//! `momentum`, `batch_size`, `bptt_window`, `init_scale`, `grid_min`,
//! `grid_max`, `grid_step`, `q`, `min_attack_duration_seconds`, `seed`.

use std::path::{Path, PathBuf};

use colad_core::detector::pet_grid;
use colad_core::lstm::MAX_HORIZONS;
use colad_core::timeseries::DEFAULT_INTERVAL_SECONDS;
use colad_core::{Metric, TrainConfig};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Capture (`.pcap`) or raw series CSV.
    pub input: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub metric: Metric,
    pub interval_seconds: u64,
    /// Binning window for captures; defaults to the first and last packet.
    pub start_time: Option<u64>,
    pub end_time: Option<u64>,
    /// Chronological train / validation / test fractions.
    pub split: [f64; 3],
    pub horizons: Vec<usize>,
    pub train: TrainConfig,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_step: f64,
    pub q: f64,
    pub min_attack_duration_seconds: u64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            out_dir: PathBuf::from("out"),
            metric: Metric::Packets,
            interval_seconds: DEFAULT_INTERVAL_SECONDS,
            start_time: None,
            end_time: None,
            split: [0.5, 0.25, 0.25],
            horizons: vec![1, 2, 3],
            train: TrainConfig::default(),
            grid_min: 0.05,
            grid_max: 1.0,
            grid_step: 0.05,
            q: 1.0,
            min_attack_duration_seconds: 2400,
            seed: 0,
        }
    }
}

/// Every key optional; absent keys keep their defaults.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub input: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub metric: Option<String>,
    pub interval_seconds: Option<u64>,
    pub start_time: Option<u64>,
    pub end_time: Option<u64>,
    pub split: Option<Vec<f64>>,
    pub horizons: Option<Vec<usize>>,
    pub hidden_size: Option<usize>,
    pub learning_rate: Option<f64>,
    pub epochs: Option<usize>,
    pub momentum: Option<f64>,
    pub batch_size: Option<usize>,
    pub bptt_window: Option<usize>,
    pub init_scale: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_step: Option<f64>,
    pub q: Option<f64>,
    pub min_attack_duration_seconds: Option<u64>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::InvalidConfig(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Later layers win: `base.merge(file).merge(flags)`.
    pub fn merge(self, over: ConfigFile) -> ConfigFile {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigFile { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            input,
            out_dir,
            metric,
            interval_seconds,
            start_time,
            end_time,
            split,
            horizons,
            hidden_size,
            learning_rate,
            epochs,
            momentum,
            batch_size,
            bptt_window,
            init_scale,
            grid_min,
            grid_max,
            grid_step,
            q,
            min_attack_duration_seconds,
            seed
        )
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let d = RunConfig::default();
        let metric = match self.metric {
            Some(m) => m
                .parse()
                .map_err(|e: colad_core::Error| CliError::InvalidConfig(e.to_string()))?,
            None => d.metric,
        };
        let split = match self.split {
            Some(v) => <[f64; 3]>::try_from(v.as_slice()).map_err(|_| {
                CliError::InvalidConfig("split needs exactly three fractions".into())
            })?,
            None => d.split,
        };
        let seed = self.seed.unwrap_or(d.seed);
        let train = TrainConfig {
            hidden_size: self.hidden_size.unwrap_or(d.train.hidden_size),
            horizons: 1,
            learning_rate: self.learning_rate.unwrap_or(d.train.learning_rate),
            epochs: self.epochs.unwrap_or(d.train.epochs),
            momentum: self.momentum.unwrap_or(d.train.momentum),
            batch_size: self.batch_size.unwrap_or(d.train.batch_size),
            bptt_window: self.bptt_window.unwrap_or(d.train.bptt_window),
            seed,
            init_scale: self.init_scale.unwrap_or(d.train.init_scale),
        };
        let config = RunConfig {
            input: self.input,
            out_dir: self.out_dir.unwrap_or(d.out_dir),
            metric,
            interval_seconds: self.interval_seconds.unwrap_or(d.interval_seconds),
            start_time: self.start_time,
            end_time: self.end_time,
            split,
            horizons: self.horizons.unwrap_or(d.horizons),
            train,
            grid_min: self.grid_min.unwrap_or(d.grid_min),
            grid_max: self.grid_max.unwrap_or(d.grid_max),
            grid_step: self.grid_step.unwrap_or(d.grid_step),
            q: self.q.unwrap_or(d.q),
            min_attack_duration_seconds: self
                .min_attack_duration_seconds
                .unwrap_or(d.min_attack_duration_seconds),
            seed,
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(CliError::InvalidConfig(msg));
        if self.interval_seconds == 0 {
            return invalid("interval_seconds must be positive".into());
        }
        if self.split.iter().any(|f| f.is_nan() || *f <= 0.0)
            || (self.split.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return invalid("split fractions must be positive and sum to 1".into());
        }
        if self.horizons.is_empty()
            || self
                .horizons
                .iter()
                .any(|h| !(1..=MAX_HORIZONS).contains(h))
        {
            return invalid(format!("horizons must be drawn from 1..={MAX_HORIZONS}"));
        }
        let mut sorted = self.horizons.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.horizons.len() {
            return invalid("horizons must not repeat".into());
        }
        self.train
            .validate()
            .map_err(|e| CliError::InvalidConfig(e.to_string()))?;
        self.grid()?;
        if !(self.q > 0.0 && self.q <= 1.0) {
            return invalid("q must be in (0, 1]".into());
        }
        if self.min_attack_duration_seconds == 0 {
            return invalid("min_attack_duration_seconds must be positive".into());
        }
        if let (Some(s), Some(e)) = (self.start_time, self.end_time) {
            if e <= s {
                return invalid("end_time must be after start_time".into());
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        pet_grid(self.grid_min, self.grid_max, self.grid_step)
            .map_err(|e| CliError::InvalidConfig(e.to_string()))
    }

    pub fn train_config(&self, horizons: usize) -> TrainConfig {
        TrainConfig {
            horizons,
            seed: self.seed,
            ..self.train.clone()
        }
    }
}
