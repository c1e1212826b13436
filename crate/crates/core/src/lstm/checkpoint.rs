use serde::{Deserialize, Serialize};

use super::train::TrainConfig;
use super::weights::LstmWeights;
use crate::error::Result;

/// JSON weight checkpoint. Floats are written in shortest round-trip form,
/// so a save/load cycle reproduces every parameter bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub hidden_size: usize,
    pub horizons: usize,
    pub seed: u64,
    pub config: TrainConfig,
    pub weights: LstmWeights,
}

impl Checkpoint {
    pub fn new(config: &TrainConfig, weights: LstmWeights) -> Self {
        Self {
            hidden_size: weights.hidden,
            horizons: weights.horizons,
            seed: config.seed,
            config: config.clone(),
            weights,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let checkpoint: Checkpoint = serde_json::from_str(text)?;
        checkpoint.weights.validate()?;
        if checkpoint.weights.hidden != checkpoint.hidden_size
            || checkpoint.weights.horizons != checkpoint.horizons
        {
            return Err(crate::error::Error::invalid(
                "checkpoint header disagrees with weights",
            ));
        }
        Ok(checkpoint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn json_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let weights = LstmWeights::random(4, 3, 0.7, &mut rng).unwrap();
        let ck = Checkpoint::new(&TrainConfig::default(), weights);
        let back = Checkpoint::from_json(&ck.to_json().unwrap()).unwrap();
        assert_eq!(back, ck);
    }

    #[test]
    fn malformed_shapes_are_rejected() {
        let mut weights = LstmWeights::zeros(2, 1).unwrap();
        weights.v.pop();
        let ck = Checkpoint::new(&TrainConfig::default(), weights);
        assert!(Checkpoint::from_json(&ck.to_json().unwrap()).is_err());
    }
}
