//! Labeled synthetic traffic: a noisy periodic baseline with injected
//! multiplicative bursts standing in for flooding episodes.

use std::f64::consts::PI;
use std::fmt::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::{Metric, RawSeries, DEFAULT_INTERVAL_SECONDS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Burst {
    pub start: usize,
    pub duration: usize,
    pub multiplier: f64,
}

impl Burst {
    pub fn end(&self) -> usize {
        self.start + self.duration
    }

    pub fn contains(&self, t: usize) -> bool {
        (self.start..self.end()).contains(&t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub length: usize,
    pub mean: f64,
    #[serde(default)]
    pub amplitude: f64,
    /// Baseline period in steps.
    pub period: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub bursts: Vec<Burst>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_interval")]
    pub interval_seconds: u64,
    #[serde(default)]
    pub start_time: u64,
}

fn default_interval() -> u64 {
    DEFAULT_INTERVAL_SECONDS
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::invalid("length must be at least 1"));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(Error::invalid("period must be positive"));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::invalid("noise_sigma must be non-negative"));
        }
        if !(self.mean.is_finite() && self.amplitude.is_finite()) {
            return Err(Error::invalid("mean and amplitude must be finite"));
        }
        if self.interval_seconds == 0 {
            return Err(Error::invalid("interval_seconds must be positive"));
        }
        for b in &self.bursts {
            if b.duration == 0 || b.end() > self.length {
                return Err(Error::invalid(format!(
                    "burst at {} of duration {} does not fit in {} steps",
                    b.start, b.duration, self.length
                )));
            }
            if !(b.multiplier >= 0.0 && b.multiplier.is_finite()) {
                return Err(Error::invalid("burst multiplier must be non-negative"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    pub series: RawSeries,
    /// True inside any burst.
    pub labels: Vec<bool>,
}

impl LabeledSeries {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels_csv(&self) -> String {
        let mut out = String::from("index,label\n");
        for (k, l) in self.labels.iter().enumerate() {
            writeln!(out, "{k},{}", u8::from(*l)).unwrap();
        }
        out
    }

    fn slice(&self, from: usize, to: usize) -> Result<Self> {
        Ok(Self {
            series: self.series.slice(from, to)?,
            labels: self.labels[from..to].to_vec(),
        })
    }
}

/// Seed-deterministic series: `max(0, mean + amplitude * sin(2 pi t / period) + noise)`,
/// multiplied inside bursts.
pub fn generate(config: &SynthConfig) -> Result<LabeledSeries> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let noise = Normal::new(0.0, config.noise_sigma).map_err(|e| Error::invalid(e.to_string()))?;
    let mut values = Vec::with_capacity(config.length);
    let mut labels = Vec::with_capacity(config.length);
    for t in 0..config.length {
        let phase = 2.0 * PI * t as f64 / config.period;
        let base = (config.mean + config.amplitude * phase.sin() + noise.sample(&mut rng)).max(0.0);
        let burst = config.bursts.iter().find(|b| b.contains(t));
        values.push(match burst {
            Some(b) => base * b.multiplier,
            None => base,
        });
        labels.push(burst.is_some());
    }
    Ok(LabeledSeries {
        series: RawSeries::new(
            config.start_time,
            config.interval_seconds,
            values,
            Metric::Packets,
        )?,
        labels,
    })
}

/// Chronological train / validation / test split. The first two must be burst-free.
pub fn split(
    labeled: &LabeledSeries,
    fractions: [f64; 3],
) -> Result<(LabeledSeries, LabeledSeries, LabeledSeries)> {
    if fractions.iter().any(|f| f.is_nan() || *f <= 0.0)
        || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9
    {
        return Err(Error::invalid(
            "split fractions must be positive and sum to 1",
        ));
    }
    let n = labeled.len();
    let train_end = (fractions[0] * n as f64).round() as usize;
    let valid_end = ((fractions[0] + fractions[1]) * n as f64).round() as usize;
    if train_end == 0 || valid_end <= train_end || valid_end >= n {
        return Err(Error::invalid(format!(
            "series of {n} steps is too short to split"
        )));
    }
    if labeled.labels[..valid_end].iter().any(|&l| l) {
        return Err(Error::AttackLeakage);
    }
    Ok((
        labeled.slice(0, train_end)?,
        labeled.slice(train_end, valid_end)?,
        labeled.slice(valid_end, n)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> SynthConfig {
        SynthConfig {
            length: 1000,
            mean: 100.0,
            amplitude: 20.0,
            period: 144.0,
            noise_sigma: 2.0,
            bursts: vec![],
            seed: 1,
            interval_seconds: 600,
            start_time: 0,
        }
    }

    #[test]
    fn noiseless_flat_baseline_is_constant() {
        let config = SynthConfig {
            amplitude: 0.0,
            noise_sigma: 0.0,
            ..base_config()
        };
        let out = generate(&config).unwrap();
        assert!(out.series.values.iter().all(|&v| v == 100.0));
        assert!(out.labels.iter().all(|&l| !l));
    }

    #[test]
    fn burst_labels_are_exact() {
        let config = SynthConfig {
            bursts: vec![Burst {
                start: 100,
                duration: 20,
                multiplier: 3.0,
            }],
            ..base_config()
        };
        let out = generate(&config).unwrap();
        let labeled: Vec<usize> = (0..out.len()).filter(|&t| out.labels[t]).collect();
        assert_eq!(labeled, (100..120).collect::<Vec<_>>());
    }

    #[test]
    fn same_seed_same_series() {
        assert_eq!(
            generate(&base_config()).unwrap(),
            generate(&base_config()).unwrap()
        );
        let other = SynthConfig {
            seed: 2,
            ..base_config()
        };
        assert_ne!(generate(&base_config()).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn noiseless_series_is_periodic() {
        let config = SynthConfig {
            noise_sigma: 0.0,
            period: 24.0,
            length: 96,
            ..base_config()
        };
        let v = generate(&config).unwrap().series.values;
        for t in 0..72 {
            assert!((v[t] - v[t + 24]).abs() < 1e-9);
        }
    }

    #[test]
    fn values_never_negative() {
        let config = SynthConfig {
            mean: 0.0,
            amplitude: 5.0,
            ..base_config()
        };
        assert!(generate(&config)
            .unwrap()
            .series
            .values
            .iter()
            .all(|&v| v >= 0.0));
    }

    #[test]
    fn invalid_configs() {
        assert!(generate(&SynthConfig {
            length: 0,
            ..base_config()
        })
        .is_err());
        let late = SynthConfig {
            bursts: vec![Burst {
                start: 990,
                duration: 20,
                multiplier: 3.0,
            }],
            ..base_config()
        };
        assert!(generate(&late).is_err());
    }

    #[test]
    fn split_examples() {
        let with_burst = |start| {
            generate(&SynthConfig {
                bursts: vec![Burst {
                    start,
                    duration: 20,
                    multiplier: 3.0,
                }],
                ..base_config()
            })
            .unwrap()
        };
        let (train, valid, test) = split(&with_burst(900), [0.5, 0.25, 0.25]).unwrap();
        assert_eq!((train.len(), valid.len(), test.len()), (500, 250, 250));
        assert_eq!(valid.series.start_time, 500 * 600);
        assert_eq!(test.labels.iter().filter(|&&l| l).count(), 20);

        let err = split(&with_burst(100), [0.5, 0.25, 0.25]).unwrap_err();
        assert_eq!(err.to_string(), "attack leakage into normal split");

        let clean = generate(&base_config()).unwrap();
        assert!(split(&clean, [0.8, 0.1, 0.1]).is_ok());
        assert!(split(&clean, [0.5, 0.5, 0.1]).is_err());
    }

    #[test]
    fn label_mass_equals_burst_duration() {
        let config = SynthConfig {
            bursts: vec![
                Burst {
                    start: 10,
                    duration: 5,
                    multiplier: 2.0,
                },
                Burst {
                    start: 400,
                    duration: 37,
                    multiplier: 4.0,
                },
            ],
            ..base_config()
        };
        let out = generate(&config).unwrap();
        assert_eq!(out.labels.iter().filter(|&&l| l).count(), 42);
        assert!(out.labels_csv().starts_with("index,label\n0,0\n"));
    }
}
