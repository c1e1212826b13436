//! Traffic ingestion: classic pcap decoding, fixed-interval binning, and
//! min-max scaling into the unit interval expected by the sigmoid output
//! layer.

mod binning;
mod csv;
mod pcap;
mod scaler;

pub use binning::bin_events;
pub use csv::{read_series_csv, write_series_csv, SeriesTable};
pub use pcap::{parse_pcap, PacketRecord, LINKTYPE_ETHERNET};
pub use scaler::{apply_scaler, fit_scaler, Scaler};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default bin width: ten minutes.
pub const DEFAULT_INTERVAL_SECONDS: u64 = 600;

/// Per-interval quantity extracted from packet records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Packets,
    Bytes,
    TcpSyn,
}

impl Metric {
    /// Contribution of one record to its bin.
    pub fn weight(self, record: &PacketRecord) -> f64 {
        match self {
            Metric::Packets => 1.0,
            Metric::Bytes => f64::from(record.original_len),
            Metric::TcpSyn => {
                if record.is_tcp_syn {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Packets => "packets",
            Metric::Bytes => "bytes",
            Metric::TcpSyn => "tcp_syn",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "packets" => Ok(Metric::Packets),
            "bytes" => Ok(Metric::Bytes),
            "tcp_syn" | "tcp-syn" | "syn" => Ok(Metric::TcpSyn),
            other => Err(Error::invalid(format!("unknown metric {other:?}"))),
        }
    }
}

/// Unscaled per-interval counts.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeries {
    pub start_time: u64,
    pub interval_seconds: u64,
    pub values: Vec<f64>,
    pub metric: Metric,
}

impl RawSeries {
    pub fn new(
        start_time: u64,
        interval_seconds: u64,
        values: Vec<f64>,
        metric: Metric,
    ) -> Result<Self> {
        if interval_seconds == 0 {
            return Err(Error::invalid("interval_seconds must be positive"));
        }
        if values.is_empty() {
            return Err(Error::invalid("series must not be empty"));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(format!(
                "raw value at index {bad} must be finite and non-negative"
            )));
        }
        Ok(Self {
            start_time,
            interval_seconds,
            values,
            metric,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Contiguous sub-series `[from, to)` with the start time shifted to match.
    pub fn slice(&self, from: usize, to: usize) -> Result<Self> {
        if from >= to || to > self.len() {
            return Err(Error::invalid(format!(
                "slice [{from}, {to}) out of range for length {}",
                self.len()
            )));
        }
        Ok(Self {
            start_time: self.start_time + from as u64 * self.interval_seconds,
            interval_seconds: self.interval_seconds,
            values: self.values[from..to].to_vec(),
            metric: self.metric,
        })
    }

    pub fn from_csv(text: &str, metric: Metric) -> Result<Self> {
        let table = read_series_csv(text)?;
        Self::new(
            table.start_time,
            table.interval_seconds,
            table.values,
            metric,
        )
    }

    pub fn to_csv(&self) -> String {
        write_series_csv(self.start_time, self.interval_seconds, &self.values)
    }
}

/// A series scaled into `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub start_time: u64,
    pub interval_seconds: u64,
    pub values: Vec<f64>,
    /// `None` when the series was loaded from disk without its scaler.
    pub scaler: Option<Scaler>,
}

impl TimeSeries {
    pub fn new(
        start_time: u64,
        interval_seconds: u64,
        values: Vec<f64>,
        scaler: Option<Scaler>,
    ) -> Result<Self> {
        if interval_seconds == 0 {
            return Err(Error::invalid("interval_seconds must be positive"));
        }
        if let Some(bad) = values
            .iter()
            .position(|v| !v.is_finite() || !(0.0..=1.0).contains(v))
        {
            return Err(Error::invalid(format!(
                "scaled value at index {bad} is outside [0, 1]"
            )));
        }
        Ok(Self {
            start_time,
            interval_seconds,
            values,
            scaler,
        })
    }

    /// Unit-interval series with the default interval; handy for tests and synthetic data.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(0, DEFAULT_INTERVAL_SECONDS, values, None)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn from_csv(text: &str, scaler: Option<Scaler>) -> Result<Self> {
        let table = read_series_csv(text)?;
        Self::new(
            table.start_time,
            table.interval_seconds,
            table.values,
            scaler,
        )
    }

    pub fn to_csv(&self) -> String {
        write_series_csv(self.start_time, self.interval_seconds, &self.values)
    }
}
