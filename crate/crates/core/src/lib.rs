//! Collective anomaly detection for univariate network traffic series.
//!
//! An LSTM trained on normal traffic predicts one to three steps ahead; the
//! mean absolute error over the predictions aimed at each step gives a
//! per-step score, and sustained runs of high scores are reported as
//! collective anomalies.

pub mod detector;
pub mod error;
pub mod lstm;
pub mod predictor;
pub mod synth;
pub mod timeseries;

pub use detector::{
    build_report, calibrate_pet, choose_cr, default_pet_grid, extract_regions, pet_grid,
    relative_error, AnomalyRegion, AnomalyReport, Thresholds,
};
pub use error::{Error, Result};
pub use lstm::{train, Checkpoint, LstmState, LstmWeights, TrainConfig, TrainOutcome};
pub use predictor::{
    make_training_pairs, point_errors, predict_series, ErrorSeries, HorizonPredictions,
};
pub use synth::{generate, split, Burst, LabeledSeries, SynthConfig};
pub use timeseries::{
    apply_scaler, bin_events, fit_scaler, parse_pcap, Metric, PacketRecord, RawSeries, Scaler,
    TimeSeries,
};
