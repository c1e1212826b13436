use serde::{Deserialize, Serialize};

use super::{RawSeries, TimeSeries};
use crate::error::{Error, Result};

/// Min-max scaler fit on the training split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub train_min: f64,
    pub train_max: f64,
}

impl Scaler {
    pub fn new(train_min: f64, train_max: f64) -> Result<Self> {
        if !(train_min.is_finite() && train_max.is_finite()) || train_max <= train_min {
            return Err(Error::DegenerateSeries);
        }
        Ok(Self {
            train_min,
            train_max,
        })
    }

    /// Scale one value, clamping anything outside the training range.
    pub fn scale(&self, v: f64) -> f64 {
        ((v - self.train_min) / (self.train_max - self.train_min)).clamp(0.0, 1.0)
    }

    pub fn unscale(&self, v: f64) -> f64 {
        self.train_min + v * (self.train_max - self.train_min)
    }
}

pub fn fit_scaler(raw: &RawSeries) -> Result<Scaler> {
    let (min, max) = raw
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Scaler::new(min, max)
}

pub fn apply_scaler(scaler: &Scaler, raw: &RawSeries) -> TimeSeries {
    TimeSeries {
        start_time: raw.start_time,
        interval_seconds: raw.interval_seconds,
        values: raw.values.iter().map(|&v| scaler.scale(v)).collect(),
        scaler: Some(*scaler),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeseries::Metric;
    use proptest::prelude::*;

    fn raw(values: &[f64]) -> RawSeries {
        RawSeries::new(0, 600, values.to_vec(), Metric::Packets).unwrap()
    }

    #[test]
    fn fit_takes_min_and_max() {
        assert_eq!(
            fit_scaler(&raw(&[2.0, 10.0, 6.0])).unwrap(),
            Scaler::new(2.0, 10.0).unwrap()
        );
        assert_eq!(
            fit_scaler(&raw(&[0.0, 1.0])).unwrap(),
            Scaler::new(0.0, 1.0).unwrap()
        );
    }

    #[test]
    fn constant_series_is_degenerate() {
        let err = fit_scaler(&raw(&[5.0, 5.0, 5.0])).unwrap_err();
        assert!(err.to_string().starts_with("degenerate series"));
    }

    #[test]
    fn apply_scales_and_clamps() {
        let s = Scaler::new(2.0, 10.0).unwrap();
        let out = apply_scaler(&s, &raw(&[6.0, 1.0, 14.0]));
        assert_eq!(out.values, vec![0.5, 0.0, 1.0]);
    }

    proptest! {
        #[test]
        fn training_data_spans_the_unit_interval(
            values in prop::collection::vec(0.0f64..1e6, 2..100),
            other in prop::collection::vec(0.0f64..2e6, 1..50),
        ) {
            let train = raw(&values);
            prop_assume!(fit_scaler(&train).is_ok());
            let s = fit_scaler(&train).unwrap();
            let scaled = apply_scaler(&s, &train);
            prop_assert!(scaled.values.iter().all(|v| (0.0..=1.0).contains(v)));
            prop_assert!(scaled.values.contains(&0.0));
            prop_assert!(scaled.values.contains(&1.0));
            let rest = apply_scaler(&s, &raw(&other));
            prop_assert!(rest.values.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
