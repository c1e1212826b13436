//! Independent reference implementations used to check the library.
//! Shared by the core integration tests and the acceptance suite.
#![allow(dead_code)]

use colad_core::lstm::{forward_step, mse_loss};
use colad_core::{LstmState, LstmWeights};

/// Summed per-step MSE over a window, forward pass only.
pub fn window_loss(weights: &LstmWeights, window: &[(f64, Vec<f64>)], initial: &LstmState) -> f64 {
    let mut state = initial.clone();
    let mut total = 0.0;
    for (x, target) in window {
        let (next, y, _) = forward_step(weights, &state, *x).unwrap();
        total += mse_loss(&y, target).unwrap();
        state = next;
    }
    total
}

/// Central finite differences of `window_loss` for every parameter.
pub fn finite_difference_gradients(
    weights: &LstmWeights,
    window: &[(f64, Vec<f64>)],
    initial: &LstmState,
    eps: f64,
) -> LstmWeights {
    let mut grads = LstmWeights::zeros(weights.hidden, weights.horizons).unwrap();
    let mut probe = weights.clone();
    for a in 0..14 {
        for p in 0..weights.arrays()[a].len() {
            let original = probe.arrays()[a][p];
            probe.arrays_mut()[a][p] = original + eps;
            let plus = window_loss(&probe, window, initial);
            probe.arrays_mut()[a][p] = original - eps;
            let minus = window_loss(&probe, window, initial);
            probe.arrays_mut()[a][p] = original;
            grads.arrays_mut()[a][p] = (plus - minus) / (2.0 * eps);
        }
    }
    grads
}

/// Largest relative discrepancy; gradients below `floor` in magnitude are compared absolutely.
pub fn max_relative_error(analytic: &LstmWeights, numeric: &LstmWeights, floor: f64) -> f64 {
    analytic
        .arrays()
        .iter()
        .zip(numeric.arrays().iter())
        .flat_map(|(a, n)| a.iter().zip(n.iter()))
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// Scalar (H = 1) LSTM written out longhand.
#[derive(Debug, Clone, Copy)]
pub struct ScalarLstm {
    pub wi: f64,
    pub ui: f64,
    pub bi: f64,
    pub wf: f64,
    pub uf: f64,
    pub bf: f64,
    pub wo: f64,
    pub uo: f64,
    pub bo: f64,
    pub wc: f64,
    pub uc: f64,
    pub bc: f64,
    pub v: [f64; 3],
    pub c: [f64; 3],
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl ScalarLstm {
    /// Returns `(h', c', y)` with `y` of length `outputs`.
    pub fn step(&self, h: f64, c: f64, x: f64, outputs: usize) -> (f64, f64, Vec<f64>) {
        let i = logistic(self.wi * x + self.ui * h + self.bi);
        let f = logistic(self.wf * x + self.uf * h + self.bf);
        let o = logistic(self.wo * x + self.uo * h + self.bo);
        let g = (self.wc * x + self.uc * h + self.bc).tanh();
        let c_next = f * c + i * g;
        let h_next = o * c_next.tanh();
        let y = (0..outputs)
            .map(|k| logistic(self.v[k] * h_next + self.c[k]))
            .collect();
        (h_next, c_next, y)
    }

    pub fn to_weights(self, outputs: usize) -> LstmWeights {
        let mut w = LstmWeights::zeros(1, outputs).unwrap();
        (w.input.w[0], w.input.u[0], w.input.b[0]) = (self.wi, self.ui, self.bi);
        (w.forget.w[0], w.forget.u[0], w.forget.b[0]) = (self.wf, self.uf, self.bf);
        (w.output.w[0], w.output.u[0], w.output.b[0]) = (self.wo, self.uo, self.bo);
        (w.candidate.w[0], w.candidate.u[0], w.candidate.b[0]) = (self.wc, self.uc, self.bc);
        w.v.copy_from_slice(&self.v[..outputs]);
        w.c.copy_from_slice(&self.c[..outputs]);
        w
    }
}

/// All windows `[i, j]` of ones that are at least `cr` long and cannot be extended.
pub fn brute_force_regions(bits: &[bool], cr: usize) -> Vec<(usize, usize)> {
    let n = bits.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let all_ones = bits[i..=j].iter().all(|&b| b);
            let long_enough = j - i + 1 >= cr;
            let left_closed = i == 0 || !bits[i - 1];
            let right_closed = j == n - 1 || !bits[j + 1];
            if all_ones && long_enough && left_closed && right_closed {
                out.push((i, j));
            }
        }
    }
    out
}

/// Linear scan for the smallest grid value meeting the fraction condition.
pub fn brute_force_pet(errors: &[f64], grid: &[f64], q: f64) -> Option<f64> {
    for &p in grid {
        let within = errors.iter().filter(|&&e| e <= p).count();
        if within as f64 >= q * errors.len() as f64 {
            return Some(p);
        }
    }
    None
}

/// One packet for the hand-built capture.
#[derive(Debug, Clone, Copy)]
pub struct FixturePacket {
    pub ts_sec: u32,
    pub ts_usec: u32,
    pub wire_len: u32,
    pub syn: bool,
}

/// A classic pcap file laid out byte by byte: 24-byte global header, then
/// 16-byte record headers each followed by an Ethernet/IPv4/TCP frame.
pub fn build_pcap(packets: &[FixturePacket], big_endian: bool) -> Vec<u8> {
    let u16b = |v: u16| {
        if big_endian {
            v.to_be_bytes()
        } else {
            v.to_le_bytes()
        }
    };
    let u32b = |v: u32| {
        if big_endian {
            v.to_be_bytes()
        } else {
            v.to_le_bytes()
        }
    };
    let mut out = Vec::new();
    out.extend(u32b(0xa1b2_c3d4));
    out.extend(u16b(2));
    out.extend(u16b(4));
    out.extend(u32b(0)); // thiszone
    out.extend(u32b(0)); // sigfigs
    out.extend(u32b(65_535)); // snaplen
    out.extend(u32b(1)); // Ethernet
    for p in packets {
        let mut frame = vec![0u8; 54];
        frame[12] = 0x08; // ethertype IPv4, network order
        frame[13] = 0x00;
        frame[14] = 0x45; // v4, IHL 5
        frame[14 + 9] = 6; // TCP
        frame[14 + 20 + 13] = if p.syn { 0x02 } else { 0x10 };
        out.extend(u32b(p.ts_sec));
        out.extend(u32b(p.ts_usec));
        out.extend(u32b(frame.len() as u32));
        out.extend(u32b(p.wire_len));
        out.extend(&frame);
    }
    out
}
