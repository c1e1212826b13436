//! Stateful multi-horizon inference and per-step prediction error.

use std::fmt::Write;

use crate::detector::relative_error;
use crate::error::{Error, Result};
use crate::lstm::{forward_step, LstmState, LstmWeights};
use crate::timeseries::TimeSeries;

/// `(x_t, [x_{t+1}, ..., x_{t+L}])` for every `t` with a full target vector.
pub fn make_training_pairs(series: &TimeSeries, horizons: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = series.len();
    if horizons == 0 || n <= horizons {
        return Err(Error::invalid(format!(
            "series of length {n} is too short for {horizons} horizons"
        )));
    }
    Ok((0..n - horizons)
        .map(|t| {
            (
                series.values[t],
                series.values[t + 1..=t + horizons].to_vec(),
            )
        })
        .collect())
}

/// `outputs[t][k - 1]` is the prediction made at step `t` for step `t + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonPredictions {
    pub horizons: usize,
    pub outputs: Vec<Vec<f64>>,
}

impl HorizonPredictions {
    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Prediction of step `t + k` made at step `t`; `None` when the target lies past the end.
    pub fn get(&self, t: usize, k: usize) -> Option<f64> {
        if k == 0 || k > self.horizons || t + k >= self.len() {
            return None;
        }
        self.outputs.get(t).map(|row| row[k - 1])
    }

    pub fn present_at(&self, t: usize) -> usize {
        (1..=self.horizons)
            .filter(|&k| self.get(t, k).is_some())
            .count()
    }

    /// Keep only the first `horizons` outputs of every step.
    pub fn truncate(&self, horizons: usize) -> Self {
        let horizons = horizons.min(self.horizons);
        Self {
            horizons,
            outputs: self
                .outputs
                .iter()
                .map(|row| row[..horizons].to_vec())
                .collect(),
        }
    }
}

/// Left-to-right stateful pass from the zero state.
pub fn predict_series(weights: &LstmWeights, series: &TimeSeries) -> Result<HorizonPredictions> {
    let mut state = LstmState::zeros(weights.hidden);
    let mut outputs = Vec::with_capacity(series.len());
    for (t, &x) in series.values.iter().enumerate() {
        let (next, y, _) =
            forward_step(weights, &state, x).map_err(|_| Error::InferenceOverflow(t))?;
        outputs.push(y);
        state = next;
    }
    Ok(HorizonPredictions {
        horizons: weights.horizons,
        outputs,
    })
}

/// Per-step error: mean relative error over all predictions that targeted the step.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    pub errors: Vec<f64>,
    pub counts: Vec<usize>,
}

pub const ERROR_HEADER: &str = "index,error,count";

impl ErrorSeries {
    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    /// Error series with every step fully covered; handy for driving the detector directly.
    pub fn from_errors(errors: Vec<f64>) -> Self {
        let counts = vec![1; errors.len()];
        Self { errors, counts }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(ERROR_HEADER);
        out.push('\n');
        for (k, (e, c)) in self.errors.iter().zip(&self.counts).enumerate() {
            writeln!(out, "{k},{e},{c}").unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim_end_matches('\r') == ERROR_HEADER => {}
            _ => return Err(Error::BadHeader),
        }
        let mut errors = Vec::new();
        let mut counts = Vec::new();
        for (i, line) in lines {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::BadRow {
                line: i + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split(',').collect();
            let [index, error, count] = fields.as_slice() else {
                return Err(bad("expected three fields"));
            };
            let index: usize = index.parse().map_err(|_| bad("bad index"))?;
            if index != errors.len() {
                return Err(Error::NonContiguousSeries(i + 1));
            }
            let error: f64 = error.parse().map_err(|_| bad("bad error"))?;
            if !(error.is_finite() && error >= 0.0) {
                return Err(bad("error must be finite and non-negative"));
            }
            errors.push(error);
            counts.push(count.parse().map_err(|_| bad("bad count"))?);
        }
        Ok(Self { errors, counts })
    }
}

/// Gather, for every step `s`, the predictions made at `s-1 .. s-L` that target it.
pub fn point_errors(predictions: &HorizonPredictions, series: &TimeSeries) -> Result<ErrorSeries> {
    let n = series.len();
    if predictions.len() != n {
        return Err(Error::invalid(format!(
            "predictions cover {} steps, series has {n}",
            predictions.len()
        )));
    }
    let mut errors = vec![0.0; n];
    let mut counts = vec![0; n];
    for s in 0..n {
        let mut sum = 0.0;
        let mut count = 0;
        for k in 1..=predictions.horizons.min(s) {
            if let Some(pred) = predictions.get(s - k, k) {
                sum += relative_error(series.values[s], pred);
                count += 1;
            }
        }
        if count > 0 {
            errors[s] = sum / count as f64;
            counts[s] = count;
        }
    }
    Ok(ErrorSeries { errors, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn series(v: &[f64]) -> TimeSeries {
        TimeSeries::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn training_pairs_examples() {
        let (a, b, c, d) = (0.1, 0.2, 0.3, 0.4);
        assert_eq!(
            make_training_pairs(&series(&[a, b, c, d]), 2).unwrap(),
            vec![(a, vec![b, c]), (b, vec![c, d])]
        );
        assert_eq!(
            make_training_pairs(&series(&[a, b]), 1).unwrap(),
            vec![(a, vec![b])]
        );
        assert!(make_training_pairs(&series(&[a, b]), 3).is_err());
    }

    #[test]
    fn zero_network_predicts_one_half_everywhere() {
        let w = LstmWeights::zeros(5, 3).unwrap();
        let p = predict_series(&w, &series(&[0.0, 0.9, 0.3, 1.0])).unwrap();
        assert!(p.outputs.iter().flatten().all(|&y| y == 0.5));
    }

    #[test]
    fn single_point_series_has_no_present_targets() {
        let w = LstmWeights::zeros(2, 2).unwrap();
        let p = predict_series(&w, &series(&[0.4])).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.present_at(0), 0);
        let e = point_errors(&p, &series(&[0.4])).unwrap();
        assert_eq!((e.errors[0], e.counts[0]), (0.0, 0));
    }

    #[test]
    fn three_horizon_mean() {
        // predictions for step 3: 0.4 (from t=2, k=1), 0.5 (t=1, k=2), 0.6 (t=0, k=3)
        let p = HorizonPredictions {
            horizons: 3,
            outputs: vec![
                vec![0.0, 0.0, 0.6],
                vec![0.0, 0.5, 0.0],
                vec![0.4, 0.0, 0.0],
                vec![0.0, 0.0, 0.0],
            ],
        };
        let e = point_errors(&p, &series(&[0.0, 0.0, 0.0, 0.3])).unwrap();
        assert!((e.errors[3] - 0.2).abs() < 1e-15);
        assert_eq!(e.counts, vec![0, 1, 2, 3]);
    }

    #[test]
    fn one_horizon_is_plain_absolute_error() {
        let p = HorizonPredictions {
            horizons: 1,
            outputs: vec![vec![0.7], vec![0.2], vec![0.9]],
        };
        let e = point_errors(&p, &series(&[0.5, 0.1, 0.6])).unwrap();
        assert_eq!(
            e.errors,
            vec![0.0, (0.1f64 - 0.7).abs(), (0.6f64 - 0.2).abs()]
        );
    }

    #[test]
    fn constant_series_zero_network_error() {
        let w = LstmWeights::zeros(3, 3).unwrap();
        let s = series(&[0.8; 12]);
        let e = point_errors(&predict_series(&w, &s).unwrap(), &s).unwrap();
        for t in 3..12 {
            assert!((e.errors[t] - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn error_csv_round_trip() {
        let e = ErrorSeries {
            errors: vec![0.0, 0.125, 0.3333333333333333],
            counts: vec![0, 1, 2],
        };
        assert_eq!(ErrorSeries::from_csv(&e.to_csv()).unwrap(), e);
        assert!(ErrorSeries::from_csv("index,value\n").is_err());
    }

    proptest! {
        #[test]
        fn every_prediction_is_consumed_once(
            values in prop::collection::vec(0.0f64..=1.0, 1..40),
            horizons in 1usize..=3,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = LstmWeights::random(3, horizons, 1.0, &mut rng).unwrap();
            let s = series(&values);
            let p = predict_series(&w, &s).unwrap();
            let e = point_errors(&p, &s).unwrap();
            let present: usize = (0..s.len()).map(|t| p.present_at(t)).sum();
            prop_assert_eq!(e.counts.iter().sum::<usize>(), present);
            prop_assert!(e.errors.iter().all(|&x| (0.0..=1.0).contains(&x)));
            for (err, count) in e.errors.iter().zip(&e.counts) {
                if *count == 0 {
                    prop_assert_eq!(*err, 0.0);
                }
            }
        }

        #[test]
        fn horizon_one_errors_ignore_extra_horizons(
            values in prop::collection::vec(0.0f64..=1.0, 1..40),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = LstmWeights::random(4, 3, 1.0, &mut rng).unwrap();
            let s = series(&values);
            let p = predict_series(&w, &s).unwrap();
            let single = point_errors(&p.truncate(1), &s).unwrap();
            for t in 1..s.len() {
                let expected = (s.values[t] - p.outputs[t - 1][0]).abs();
                prop_assert_eq!(single.errors[t], expected);
            }
        }
    }
}
