use super::weights::{Gate, LstmState, LstmWeights};
use crate::error::{Error, Result};

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Activations of one forward step, kept for backpropagation.
#[derive(Debug, Clone)]
pub struct StepCache {
    pub x: f64,
    pub h_prev: Vec<f64>,
    pub c_prev: Vec<f64>,
    pub i: Vec<f64>,
    pub f: Vec<f64>,
    pub o: Vec<f64>,
    pub g: Vec<f64>,
    pub c: Vec<f64>,
    pub tanh_c: Vec<f64>,
    pub h: Vec<f64>,
    pub y: Vec<f64>,
}

fn gate_preactivation(weights: &LstmWeights, gate: Gate, x: f64, h: &[f64]) -> Vec<f64> {
    let p = weights.gate(gate);
    let n = weights.hidden;
    (0..n)
        .map(|j| {
            let row = &p.u[j * n..(j + 1) * n];
            p.w[j] * x + row.iter().zip(h).map(|(u, h)| u * h).sum::<f64>() + p.b[j]
        })
        .collect()
}

/// One LSTM step. Returns the next state, the L sigmoid outputs, and the cache.
pub fn forward_step(
    weights: &LstmWeights,
    state: &LstmState,
    x: f64,
) -> Result<(LstmState, Vec<f64>, StepCache)> {
    let n = weights.hidden;
    debug_assert_eq!(state.h.len(), n);
    let i: Vec<f64> = gate_preactivation(weights, Gate::Input, x, &state.h)
        .into_iter()
        .map(sigmoid)
        .collect();
    let f: Vec<f64> = gate_preactivation(weights, Gate::Forget, x, &state.h)
        .into_iter()
        .map(sigmoid)
        .collect();
    let o: Vec<f64> = gate_preactivation(weights, Gate::Output, x, &state.h)
        .into_iter()
        .map(sigmoid)
        .collect();
    let g: Vec<f64> = gate_preactivation(weights, Gate::Candidate, x, &state.h)
        .into_iter()
        .map(f64::tanh)
        .collect();
    let c: Vec<f64> = (0..n).map(|j| f[j] * state.c[j] + i[j] * g[j]).collect();
    let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
    let h: Vec<f64> = (0..n).map(|j| o[j] * tanh_c[j]).collect();
    let y: Vec<f64> = (0..weights.horizons)
        .map(|k| {
            let row = &weights.v[k * n..(k + 1) * n];
            sigmoid(row.iter().zip(&h).map(|(v, h)| v * h).sum::<f64>() + weights.c[k])
        })
        .collect();

    if !(c.iter().all(|v| v.is_finite())
        && h.iter().all(|v| v.is_finite())
        && y.iter().all(|v| v.is_finite()))
    {
        return Err(Error::ForwardOverflow);
    }

    let next = LstmState {
        h: h.clone(),
        c: c.clone(),
    };
    let cache = StepCache {
        x,
        h_prev: state.h.clone(),
        c_prev: state.c.clone(),
        i,
        f,
        o,
        g,
        c,
        tanh_c,
        h,
        y: y.clone(),
    };
    Ok((next, y, cache))
}

/// Mean squared error over the horizon outputs.
pub fn mse_loss(y: &[f64], target: &[f64]) -> Result<f64> {
    if y.len() != target.len() || y.is_empty() {
        return Err(Error::invalid(format!(
            "loss needs equal non-empty lengths, got {} and {}",
            y.len(),
            target.len()
        )));
    }
    let sum: f64 = y.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(sum / y.len() as f64)
}
