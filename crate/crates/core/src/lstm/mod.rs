//! Single-layer LSTM predictor: one scalar input, a vanilla three-gate LSTM
//! hidden layer, and a sigmoid output layer with one node per prediction
//! horizon. Trained with truncated BPTT and SGD with momentum.

mod bptt;
mod cell;
mod checkpoint;
mod optim;
mod train;
mod weights;

pub use bptt::{bptt_gradients, WindowGradients};
pub use cell::{forward_step, mse_loss, sigmoid, StepCache};
pub use checkpoint::Checkpoint;
pub use optim::{clip_gradients, sgd_momentum_update, Velocity, GRADIENT_CLIP};
pub use train::{train, TrainConfig, TrainOutcome};
pub use weights::{Gate, GateParams, LstmState, LstmWeights, MAX_HORIZONS};
