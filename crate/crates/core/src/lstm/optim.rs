use super::weights::LstmWeights;
use crate::error::{Error, Result};

/// Element-wise gradient bound applied before each update.
pub const GRADIENT_CLIP: f64 = 5.0;

/// Momentum accumulator, zero-initialized, same shape as the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Velocity(pub LstmWeights);

impl Velocity {
    pub fn zeros_like(weights: &LstmWeights) -> Self {
        Velocity(
            LstmWeights::zeros(weights.hidden, weights.horizons).expect("shape already validated"),
        )
    }
}

/// `v' = momentum * v - lr * grad; w' = w + v'` on every parameter.
pub fn sgd_momentum_update(
    weights: &mut LstmWeights,
    velocity: &mut Velocity,
    gradients: &LstmWeights,
    learning_rate: f64,
    momentum: f64,
) -> Result<()> {
    if !(weights.same_shape(&velocity.0) && weights.same_shape(gradients)) {
        return Err(Error::invalid(
            "weights, velocity and gradients differ in shape",
        ));
    }
    for ((w, v), g) in weights
        .arrays_mut()
        .into_iter()
        .zip(velocity.0.arrays_mut())
        .zip(gradients.arrays())
    {
        for ((w, v), g) in w.iter_mut().zip(v.iter_mut()).zip(g) {
            *v = momentum * *v - learning_rate * g;
            *w += *v;
        }
    }
    Ok(())
}

/// Clamp every component into `[-bound, bound]`. Returns whether anything changed.
pub fn clip_gradients(gradients: &mut LstmWeights, bound: f64) -> bool {
    let mut clipped = false;
    for array in gradients.arrays_mut() {
        for g in array.iter_mut() {
            if g.abs() > bound {
                *g = g.clamp(-bound, bound);
                clipped = true;
            }
        }
    }
    clipped
}
