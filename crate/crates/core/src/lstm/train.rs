use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bptt::bptt_gradients;
use super::optim::{clip_gradients, sgd_momentum_update, Velocity, GRADIENT_CLIP};
use super::weights::{LstmState, LstmWeights, MAX_HORIZONS};
use crate::error::{Error, Result};
use crate::predictor::make_training_pairs;
use crate::timeseries::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub hidden_size: usize,
    pub horizons: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub momentum: f64,
    /// Only 1 is supported: one update per BPTT window.
    pub batch_size: usize,
    pub bptt_window: usize,
    pub seed: u64,
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_size: 10,
            horizons: 1,
            learning_rate: 1e-4,
            epochs: 100,
            momentum: 0.5,
            batch_size: 1,
            bptt_window: 16,
            seed: 0,
            init_scale: 0.1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_size == 0 {
            return Err(Error::invalid("hidden_size must be at least 1"));
        }
        if !(1..=MAX_HORIZONS).contains(&self.horizons) {
            return Err(Error::invalid(format!(
                "horizons must be in 1..={MAX_HORIZONS}"
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning_rate must be positive"));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::invalid("momentum must be in [0, 1)"));
        }
        if self.epochs == 0 {
            return Err(Error::invalid("epochs must be at least 1"));
        }
        if self.bptt_window == 0 {
            return Err(Error::invalid("bptt_window must be at least 1"));
        }
        if self.batch_size != 1 {
            return Err(Error::invalid("only batch_size 1 is supported"));
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return Err(Error::invalid("init_scale must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub weights: LstmWeights,
    /// Epoch-mean training loss, one entry per epoch.
    pub loss_curve: Vec<f64>,
    /// Number of updates whose gradients hit the clip bound.
    pub clipped_updates: usize,
}

/// Stateful training on a normal-only series.
///
/// Each epoch walks the series in order from the zero state, carrying the
/// state across BPTT windows and applying one momentum update per window.
pub fn train(series: &TimeSeries, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    if series.len() <= config.horizons + 1 {
        return Err(Error::invalid(format!(
            "series of length {} is too short for {} horizons",
            series.len(),
            config.horizons
        )));
    }
    let pairs = make_training_pairs(series, config.horizons)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut weights = LstmWeights::random(
        config.hidden_size,
        config.horizons,
        config.init_scale,
        &mut rng,
    )?;
    let mut velocity = Velocity::zeros_like(&weights);
    let mut loss_curve = Vec::with_capacity(config.epochs);
    let mut clipped_updates = 0;

    for epoch in 0..config.epochs {
        let mut state = LstmState::zeros(config.hidden_size);
        let mut loss_sum = 0.0;
        for window in pairs.chunks(config.bptt_window) {
            let step = bptt_gradients(&weights, window, &state).map_err(|e| match e {
                Error::ForwardOverflow | Error::BackwardOverflow => {
                    Error::TrainingDiverged(epoch + 1)
                }
                other => other,
            })?;
            let mut gradients = step.gradients;
            if clip_gradients(&mut gradients, GRADIENT_CLIP) {
                clipped_updates += 1;
                log::warn!(
                    "epoch {}: gradient clipped to +/-{GRADIENT_CLIP}",
                    epoch + 1
                );
            }
            sgd_momentum_update(
                &mut weights,
                &mut velocity,
                &gradients,
                config.learning_rate,
                config.momentum,
            )?;
            if !weights.is_finite() {
                return Err(Error::TrainingDiverged(epoch + 1));
            }
            loss_sum += step.mean_loss * window.len() as f64;
            state = step.final_state;
        }
        let epoch_loss = loss_sum / pairs.len() as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::TrainingDiverged(epoch + 1));
        }
        log::debug!("epoch {}: loss {epoch_loss:.6}", epoch + 1);
        loss_curve.push(epoch_loss);
    }

    Ok(TrainOutcome {
        weights,
        loss_curve,
        clipped_updates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64, n: usize) -> TimeSeries {
        TimeSeries::from_values(vec![v; n]).unwrap()
    }

    #[test]
    fn loss_curve_has_one_entry_per_epoch() {
        let config = TrainConfig {
            epochs: 7,
            hidden_size: 3,
            ..TrainConfig::default()
        };
        let out = train(&constant(0.2, 30), &config).unwrap();
        assert_eq!(out.loss_curve.len(), 7);
    }

    #[test]
    fn constant_series_loss_decreases() {
        let config = TrainConfig {
            epochs: 20,
            ..TrainConfig::default()
        };
        let out = train(&constant(0.5, 200), &config).unwrap();
        for pair in out.loss_curve.windows(2) {
            assert!(pair[1] <= pair[0], "{:?}", out.loss_curve);
        }
        assert!(out.loss_curve.last() < out.loss_curve.first());
    }

    #[test]
    fn training_is_deterministic() {
        let series = TimeSeries::from_values(
            (0..120)
                .map(|t| 0.5 + 0.4 * (t as f64 / 9.0).sin())
                .collect(),
        )
        .unwrap();
        let config = TrainConfig {
            epochs: 5,
            horizons: 2,
            seed: 42,
            ..TrainConfig::default()
        };
        let a = train(&series, &config).unwrap();
        let b = train(&series, &config).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.loss_curve, b.loss_curve);
    }

    #[test]
    fn short_series_is_rejected() {
        let config = TrainConfig {
            horizons: 3,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train(&constant(0.5, 4), &config),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn config_validation() {
        let bad = [
            TrainConfig {
                learning_rate: 0.0,
                ..TrainConfig::default()
            },
            TrainConfig {
                momentum: 1.0,
                ..TrainConfig::default()
            },
            TrainConfig {
                epochs: 0,
                ..TrainConfig::default()
            },
            TrainConfig {
                bptt_window: 0,
                ..TrainConfig::default()
            },
            TrainConfig {
                horizons: 4,
                ..TrainConfig::default()
            },
            TrainConfig {
                batch_size: 8,
                ..TrainConfig::default()
            },
        ];
        for config in bad {
            assert!(config.validate().is_err(), "{config:?}");
        }
    }
}
