//! Inputs for the benchmarks.

use colad_core::{LstmState, LstmWeights, TimeSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A little-endian classic pcap with `count` Ethernet/IPv4/TCP frames one
/// second apart, every fourth a SYN.
pub fn capture(count: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + count as usize * 70);
    out.extend(0xa1b2_c3d4u32.to_le_bytes());
    out.extend(2u16.to_le_bytes());
    out.extend(4u16.to_le_bytes());
    out.extend([0u8; 8]);
    out.extend(65_535u32.to_le_bytes());
    out.extend(1u32.to_le_bytes());
    for k in 0..count {
        let mut frame = [0u8; 54];
        frame[12] = 0x08;
        frame[14] = 0x45;
        frame[23] = 6;
        frame[47] = if k % 4 == 0 { 0x02 } else { 0x10 };
        out.extend(k.to_le_bytes());
        out.extend(0u32.to_le_bytes());
        out.extend((frame.len() as u32).to_le_bytes());
        out.extend(1500u32.to_le_bytes());
        out.extend(frame);
    }
    out
}

pub fn weights(hidden: usize, horizons: usize) -> LstmWeights {
    LstmWeights::random(hidden, horizons, 0.1, &mut ChaCha8Rng::seed_from_u64(0)).unwrap()
}

/// A BPTT window of `len` steps with random inputs and targets.
pub fn window(len: usize, horizons: usize) -> Vec<(f64, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..len)
        .map(|_| (rng.gen(), (0..horizons).map(|_| rng.gen()).collect()))
        .collect()
}

pub fn state(hidden: usize) -> LstmState {
    LstmState::zeros(hidden)
}

/// A scaled daily sine of `len` steps.
pub fn series(len: usize) -> TimeSeries {
    let values = (0..len)
        .map(|t| 0.5 + 0.4 * (2.0 * std::f64::consts::PI * t as f64 / 144.0).sin())
        .collect();
    TimeSeries::from_values(values).unwrap()
}

/// Per-step errors with a few high stretches.
pub fn errors(len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..len)
        .map(|t| {
            if t % 97 < 6 {
                0.9
            } else {
                rng.gen_range(0.0..0.4)
            }
        })
        .collect()
}
