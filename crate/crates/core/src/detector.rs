//! Collective anomaly detection over a per-step error signal.
//!
//! A step is a candidate when its error strictly exceeds the prediction error
//! threshold (PET). A maximal run of at least `cr` candidates (the collective
//! range) is reported as one anomaly region.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predictor::ErrorSeries;

pub fn relative_error(x: f64, x_hat: f64) -> f64 {
    (x - x_hat).abs()
}

/// Evenly spaced PET candidates from `min` to `max` inclusive.
///
/// Values are rounded to 12 decimals so that e.g. `0.05 + 5 * 0.05` lands on
/// the double nearest `0.3`.
pub fn pet_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min > 0.0 && step > 0.0 && max >= min && max.is_finite()) {
        return Err(Error::invalid(format!(
            "bad PET grid: min {min}, max {max}, step {step}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// The 20-value grid `0.05, 0.10, ..., 1.00`.
pub fn default_pet_grid() -> Vec<f64> {
    (1..=20).map(|k| f64::from(k) / 20.0).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("PET grid is empty"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("PET grid must be strictly increasing"));
    }
    Ok(())
}

fn fraction_within(errors: &[f64], pet: f64) -> f64 {
    if errors.is_empty() {
        return 1.0;
    }
    errors.iter().filter(|&&e| e <= pet).count() as f64 / errors.len() as f64
}

/// Smallest grid value under which at least a `target_fraction` of the
/// validation steps have error `<= pet`.
pub fn calibrate_pet(validation: &ErrorSeries, grid: &[f64], target_fraction: f64) -> Result<f64> {
    check_grid(grid)?;
    if !(target_fraction > 0.0 && target_fraction <= 1.0) {
        return Err(Error::invalid("target fraction must be in (0, 1]"));
    }
    grid.iter()
        .copied()
        .find(|&pet| fraction_within(&validation.errors, pet) >= target_fraction)
        .ok_or(Error::CalibrationFailed)
}

/// Minimum run length covering the given attack duration.
pub fn choose_cr(interval_seconds: u64, min_attack_duration_seconds: u64) -> Result<usize> {
    if interval_seconds == 0 || min_attack_duration_seconds == 0 {
        return Err(Error::invalid(
            "interval and attack duration must be positive",
        ));
    }
    Ok(min_attack_duration_seconds.div_ceil(interval_seconds) as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub pet: f64,
    pub cr: usize,
    pub grid: Vec<f64>,
    pub target_fraction: f64,
}

impl Thresholds {
    pub fn new(pet: f64, cr: usize, grid: Vec<f64>, target_fraction: f64) -> Result<Self> {
        check_grid(&grid)?;
        if cr == 0 {
            return Err(Error::invalid("collective range must be at least 1"));
        }
        if !(pet > 0.0 && pet <= 1.0) {
            return Err(Error::invalid("PET must be in (0, 1]"));
        }
        if !grid.contains(&pet) {
            return Err(Error::invalid("PET must be a member of its grid"));
        }
        if !(target_fraction > 0.0 && target_fraction <= 1.0) {
            return Err(Error::invalid("target fraction must be in (0, 1]"));
        }
        Ok(Self {
            pet,
            cr,
            grid,
            target_fraction,
        })
    }

    /// Calibrate PET on validation errors with a fixed collective range.
    pub fn calibrate(
        validation: &ErrorSeries,
        cr: usize,
        grid: Vec<f64>,
        target_fraction: f64,
    ) -> Result<Self> {
        let pet = calibrate_pet(validation, &grid, target_fraction)?;
        Self::new(pet, cr, grid, target_fraction)
    }

    /// A single-value grid, for sweeping a fixed PET.
    pub fn fixed(pet: f64, cr: usize) -> Result<Self> {
        Self::new(pet, cr, vec![pet], 1.0)
    }
}

/// Inclusive range of time-step indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnomalyRegion {
    pub start: usize,
    pub end: usize,
}

impl AnomalyRegion {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn overlap(&self, start: usize, end: usize) -> usize {
        let lo = self.start.max(start);
        let hi = self.end.min(end);
        if lo > hi {
            0
        } else {
            hi - lo + 1
        }
    }
}

/// Every maximal run of steps with error `> pet` that is at least `cr` long.
pub fn extract_regions(errors: &[f64], thresholds: &Thresholds) -> Vec<AnomalyRegion> {
    let mut regions = Vec::new();
    let mut run_start = None;
    for (t, &e) in errors.iter().enumerate() {
        match (e > thresholds.pet, run_start) {
            (true, None) => run_start = Some(t),
            (false, Some(start)) => {
                if t - start >= thresholds.cr {
                    regions.push(AnomalyRegion { start, end: t - 1 });
                }
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = run_start {
        if errors.len() - start >= thresholds.cr {
            regions.push(AnomalyRegion {
                start,
                end: errors.len() - 1,
            });
        }
    }
    regions
}

pub fn covered_steps(regions: &[AnomalyRegion]) -> usize {
    regions.iter().map(AnomalyRegion::len).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyReport {
    pub label: String,
    pub total_steps: usize,
    pub pet: f64,
    pub cr: usize,
    pub regions: Vec<AnomalyRegion>,
    /// Percentage rounded to two decimals.
    pub anomaly_ratio_percent: f64,
    pub per_step_errors_path: Option<String>,
}

impl AnomalyReport {
    pub fn covered_steps(&self) -> usize {
        covered_steps(&self.regions)
    }

    /// Exact covered fraction, before rounding.
    pub fn anomaly_ratio(&self) -> f64 {
        if self.total_steps == 0 {
            0.0
        } else {
            self.covered_steps() as f64 / self.total_steps as f64
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Two-column text rendering: anomaly regions and the anomaly ratio.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dataset: {}", self.label).unwrap();
        writeln!(
            out,
            "PET: {}  CR: {}  steps: {}",
            self.pet, self.cr, self.total_steps
        )
        .unwrap();
        writeln!(out, "{:<20} Anomaly ratio", "Anomaly region").unwrap();
        let ratio = format!("{:.2}%", self.anomaly_ratio_percent);
        if self.regions.is_empty() {
            writeln!(out, "{:<20} {ratio}", "-").unwrap();
        }
        for (i, r) in self.regions.iter().enumerate() {
            let range = format!("{} - {}", r.start, r.end);
            let ratio_col = if i == 0 { ratio.as_str() } else { "" };
            writeln!(out, "{range:<20} {ratio_col}").unwrap();
        }
        out
    }
}

pub fn round_percent(fraction: f64) -> f64 {
    (fraction * 100.0 * 100.0).round() / 100.0
}

pub fn build_report(
    regions: Vec<AnomalyRegion>,
    total_steps: usize,
    thresholds: &Thresholds,
    label: &str,
) -> Result<AnomalyReport> {
    for r in &regions {
        if r.end < r.start || r.end >= total_steps {
            return Err(Error::invalid(format!(
                "region {}-{} is outside {total_steps} steps",
                r.start, r.end
            )));
        }
    }
    if regions.windows(2).any(|w| w[1].start <= w[0].end) {
        return Err(Error::invalid("regions overlap or are unsorted"));
    }
    let covered = covered_steps(&regions);
    let fraction = if total_steps == 0 {
        0.0
    } else {
        covered as f64 / total_steps as f64
    };
    Ok(AnomalyReport {
        label: label.to_string(),
        total_steps,
        pet: thresholds.pet,
        cr: thresholds.cr,
        regions,
        anomaly_ratio_percent: round_percent(fraction),
        per_step_errors_path: None,
    })
}
