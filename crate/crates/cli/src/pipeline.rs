//! The four pipeline stages plus report aggregation.
//!
//! ingest: capture/CSV -> binned raw series -> scaler fit on the train split -> scaled splits
//! train: one checkpoint and loss curve per horizon count
//! calibrate: PET by grid search on validation errors, CR from attack duration
//! detect: error series, regions and reports for the validation and test splits

use std::fmt::Write;
use std::fs;

use colad_core::{
    apply_scaler, bin_events, build_report, choose_cr, extract_regions, fit_scaler, parse_pcap,
    point_errors, predict_series, train, AnomalyReport, Checkpoint, ErrorSeries, RawSeries, Scaler,
    Thresholds, TimeSeries,
};

use crate::artifacts::{self, ArtifactDir, DETECT_LABELS};
use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Ingest,
    Train,
    Calibrate,
    Detect,
    Report,
}

impl Stage {
    pub const PIPELINE: [Stage; 5] = [
        Stage::Ingest,
        Stage::Train,
        Stage::Calibrate,
        Stage::Detect,
        Stage::Report,
    ];
}

/// Run the requested stages in pipeline order.
pub fn run_pipeline(config: &RunConfig, stages: &[Stage]) -> Result<()> {
    config.validate()?;
    let dir = ArtifactDir::new(&config.out_dir);
    for stage in Stage::PIPELINE.iter().filter(|s| stages.contains(s)) {
        log::info!("stage {stage:?}");
        match stage {
            Stage::Ingest => ingest(config, &dir)?,
            Stage::Train => train_models(config, &dir)?,
            Stage::Calibrate => calibrate(config, &dir)?,
            Stage::Detect => detect(config, &dir)?,
            Stage::Report => {
                report(config, &dir)?;
            }
        }
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(colad_core::Error::from)?;
    text.push('\n');
    Ok(text)
}

fn load_raw_input(config: &RunConfig) -> Result<RawSeries> {
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| CliError::InvalidConfig("no input given".into()))?;
    let bytes = fs::read(input)
        .map_err(|e| CliError::InvalidConfig(format!("cannot read {}: {e}", input.display())))?;
    let is_pcap = input
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("pcap") || ext.eq_ignore_ascii_case("cap"));
    if is_pcap {
        let records = parse_pcap(&bytes)?;
        let first = records.iter().map(|r| u64::from(r.ts_sec)).min();
        let last = records.iter().map(|r| u64::from(r.ts_sec)).max();
        let start = config.start_time.or(first).ok_or_else(|| {
            CliError::InvalidConfig("capture holds no packets; set start_time/end_time".into())
        })?;
        let end = config
            .end_time
            .or(last.map(|t| t + 1))
            .unwrap_or(start + config.interval_seconds);
        Ok(bin_events(
            &records,
            start,
            end,
            config.interval_seconds,
            config.metric,
        )?)
    } else {
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::InvalidConfig("series CSV is not UTF-8".into()))?;
        Ok(RawSeries::from_csv(&text, config.metric)?)
    }
}

fn split_bounds(n: usize, split: [f64; 3]) -> Result<(usize, usize)> {
    let train_end = (split[0] * n as f64).round() as usize;
    let valid_end = ((split[0] + split[1]) * n as f64).round() as usize;
    if train_end < 3 || valid_end <= train_end || valid_end >= n {
        return Err(CliError::InvalidConfig(format!(
            "series of {n} steps is too short for split {split:?}"
        )));
    }
    Ok((train_end, valid_end))
}

pub fn ingest(config: &RunConfig, dir: &ArtifactDir) -> Result<()> {
    let raw = load_raw_input(config)?;
    let (train_end, valid_end) = split_bounds(raw.len(), config.split)?;
    let train_raw = raw.slice(0, train_end)?;
    let scaler = fit_scaler(&train_raw)?;
    dir.write(artifacts::RAW_SERIES, &raw.to_csv())?;
    dir.write(artifacts::SCALER, &json(&scaler)?)?;
    for (label, from, to) in [
        ("train", 0, train_end),
        ("valid", train_end, valid_end),
        ("test", valid_end, raw.len()),
    ] {
        let scaled = apply_scaler(&scaler, &raw.slice(from, to)?);
        dir.write(artifacts::series(label), &scaled.to_csv())?;
    }
    Ok(())
}

fn load_scaled(dir: &ArtifactDir, label: &str) -> Result<TimeSeries> {
    let scaler: Option<Scaler> = match dir.read(artifacts::SCALER) {
        Ok(text) => Some(serde_json::from_str(&text).map_err(colad_core::Error::from)?),
        Err(CliError::MissingArtifact(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(TimeSeries::from_csv(
        &dir.read(artifacts::series(label))?,
        scaler,
    )?)
}

fn load_model(dir: &ArtifactDir, horizons: usize) -> Result<Checkpoint> {
    Ok(Checkpoint::from_json(
        &dir.read(&artifacts::model(horizons))?,
    )?)
}

pub fn train_models(config: &RunConfig, dir: &ArtifactDir) -> Result<()> {
    let series = load_scaled(dir, "train")?;
    // horizon variants share nothing mutable, so they train concurrently
    let outcomes: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .horizons
            .iter()
            .map(|&h| {
                let tc = config.train_config(h);
                let series = &series;
                scope.spawn(move || train(series, &tc).map(|out| (tc, out)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("training thread panicked"))
            .collect()
    });
    for outcome in outcomes {
        let (tc, out) = outcome?;
        let mut curve = String::from("epoch,loss\n");
        for (epoch, loss) in out.loss_curve.iter().enumerate() {
            writeln!(curve, "{},{loss}", epoch + 1).unwrap();
        }
        dir.write(&artifacts::loss_curve(tc.horizons), &curve)?;
        dir.write(
            &artifacts::model(tc.horizons),
            &Checkpoint::new(&tc, out.weights).to_json()?,
        )?;
    }
    Ok(())
}

fn score(checkpoint: &Checkpoint, series: &TimeSeries) -> Result<ErrorSeries> {
    let predictions = predict_series(&checkpoint.weights, series)?;
    Ok(point_errors(&predictions, series)?)
}

pub fn calibrate(config: &RunConfig, dir: &ArtifactDir) -> Result<()> {
    let valid = load_scaled(dir, "valid")?;
    let cr = choose_cr(valid.interval_seconds, config.min_attack_duration_seconds)?;
    for &h in &config.horizons {
        let checkpoint = load_model(dir, h)?;
        let errors = score(&checkpoint, &valid)?;
        let thresholds = Thresholds::calibrate(&errors, cr, config.grid()?, config.q)?;
        dir.write(&artifacts::errors("valid", h), &errors.to_csv())?;
        dir.write(&artifacts::thresholds(h), &json(&thresholds)?)?;
    }
    Ok(())
}

pub fn detect(config: &RunConfig, dir: &ArtifactDir) -> Result<()> {
    for &h in &config.horizons {
        let checkpoint = load_model(dir, h)?;
        let thresholds: Thresholds = serde_json::from_str(&dir.read(&artifacts::thresholds(h))?)
            .map_err(colad_core::Error::from)?;
        for label in DETECT_LABELS {
            let series = load_scaled(dir, label)?;
            let errors = score(&checkpoint, &series)?;
            let regions = extract_regions(&errors.errors, &thresholds);
            let errors_name = artifacts::errors(label, h);
            let mut report =
                build_report(regions, series.len(), &thresholds, &format!("{label}_L{h}"))?;
            report.per_step_errors_path = Some(errors_name.clone());
            dir.write(&errors_name, &errors.to_csv())?;
            dir.write(&artifacts::report_json(label, h), &report.to_json()?)?;
            dir.write(&artifacts::report_text(label, h), &report.to_text())?;
        }
    }
    Ok(())
}

/// Table with one row per dataset and a region/ratio column pair per horizon count.
pub fn summary_table(config: &RunConfig, reports: &[(usize, &str, AnomalyReport)]) -> String {
    let mut out = String::new();
    let mut header = format!("{:<8}", "Dataset");
    for h in &config.horizons {
        write!(
            header,
            " | {:<16} {:>8}",
            format!("{h}-step region"),
            "ratio"
        )
        .unwrap();
    }
    writeln!(out, "{header}").unwrap();
    for label in DETECT_LABELS {
        let cols: Vec<&AnomalyReport> = config
            .horizons
            .iter()
            .filter_map(|h| {
                reports
                    .iter()
                    .find(|(rh, rl, _)| rh == h && *rl == label)
                    .map(|(_, _, r)| r)
            })
            .collect();
        let rows = cols
            .iter()
            .map(|r| r.regions.len())
            .max()
            .unwrap_or(0)
            .max(1);
        for row in 0..rows {
            let mut line = format!("{:<8}", if row == 0 { label } else { "" });
            for r in &cols {
                let region = r
                    .regions
                    .get(row)
                    .map(|g| format!("{} - {}", g.start, g.end))
                    .unwrap_or_else(|| "-".into());
                let ratio = if row == 0 {
                    format!("{:.2}%", r.anomaly_ratio_percent)
                } else {
                    String::new()
                };
                write!(line, " | {region:<16} {ratio:>8}").unwrap();
            }
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
    }
    out
}

pub fn report(config: &RunConfig, dir: &ArtifactDir) -> Result<String> {
    let mut reports = Vec::new();
    for &h in &config.horizons {
        for label in DETECT_LABELS {
            let report = AnomalyReport::from_json(&dir.read(&artifacts::report_json(label, h))?)?;
            reports.push((h, label, report));
        }
    }
    let table = summary_table(config, &reports);
    dir.write(artifacts::SUMMARY, &table)?;
    Ok(table)
}
