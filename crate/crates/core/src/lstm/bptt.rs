#![allow(clippy::needless_range_loop)]

use super::cell::{forward_step, mse_loss, StepCache};
use super::weights::{Gate, LstmState, LstmWeights};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct WindowGradients {
    /// d(sum of per-step losses) / d(parameter), shaped like the weights.
    pub gradients: LstmWeights,
    /// Forward state after the window, detached from the graph.
    pub final_state: LstmState,
    /// Mean of the per-step losses.
    pub mean_loss: f64,
}

/// Truncated BPTT over one window of `(input, targets)` pairs.
pub fn bptt_gradients(
    weights: &LstmWeights,
    window: &[(f64, Vec<f64>)],
    initial_state: &LstmState,
) -> Result<WindowGradients> {
    let n = weights.hidden;
    let l = weights.horizons;
    let mut grads = LstmWeights::zeros(n, l)?;
    if window.is_empty() {
        return Ok(WindowGradients {
            gradients: grads,
            final_state: initial_state.clone(),
            mean_loss: 0.0,
        });
    }

    let mut caches: Vec<StepCache> = Vec::with_capacity(window.len());
    let mut state = initial_state.clone();
    let mut loss_sum = 0.0;
    for (x, target) in window {
        if target.len() != l {
            return Err(Error::invalid(format!(
                "target has {} horizons, network has {l}",
                target.len()
            )));
        }
        let (next, y, cache) = forward_step(weights, &state, *x)?;
        loss_sum += mse_loss(&y, target)?;
        caches.push(cache);
        state = next;
    }

    let mut dh_next = vec![0.0; n];
    let mut dc_next = vec![0.0; n];
    let mut da = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for (cache, (_, target)) in caches.iter().zip(window).rev() {
        // output layer: y = sigmoid(V h + c), loss = mean_k (y_k - t_k)^2
        let mut dh = dh_next.clone();
        for k in 0..l {
            let y = cache.y[k];
            let dz = 2.0 * (y - target[k]) / l as f64 * y * (1.0 - y);
            grads.c[k] += dz;
            let row = k * n;
            for j in 0..n {
                grads.v[row + j] += dz * cache.h[j];
                dh[j] += dz * weights.v[row + j];
            }
        }

        for j in 0..n {
            let (i, f, o, g) = (cache.i[j], cache.f[j], cache.o[j], cache.g[j]);
            let tc = cache.tanh_c[j];
            let d_o = dh[j] * tc;
            let dc = dh[j] * o * (1.0 - tc * tc) + dc_next[j];
            let d_i = dc * g;
            let d_f = dc * cache.c_prev[j];
            let d_g = dc * i;
            dc_next[j] = dc * f;
            da[0][j] = d_i * i * (1.0 - i);
            da[1][j] = d_f * f * (1.0 - f);
            da[2][j] = d_o * o * (1.0 - o);
            da[3][j] = d_g * (1.0 - g * g);
        }

        dh_next.iter_mut().for_each(|v| *v = 0.0);
        for (gate, d_pre) in Gate::ALL.iter().zip(&da) {
            let p = weights.gate(*gate);
            let gp = grads.gate_mut(*gate);
            for j in 0..n {
                let d = d_pre[j];
                gp.w[j] += d * cache.x;
                gp.b[j] += d;
                let row = j * n;
                for k in 0..n {
                    gp.u[row + k] += d * cache.h_prev[k];
                    dh_next[k] += d * p.u[row + k];
                }
            }
        }
    }

    if !grads.is_finite() {
        return Err(Error::BackwardOverflow);
    }
    Ok(WindowGradients {
        gradients: grads,
        final_state: state,
        mean_loss: loss_sum / window.len() as f64,
    })
}
