#![allow(dead_code)]

use colad_core::{Burst, SynthConfig};

pub const SCENARIO_LENGTH: usize = 2000;
pub const BURST_START: usize = 1700;
pub const BURST_LEN: usize = 20;

/// Daily cycle of 144 ten-minute steps; raw noise 4.6 on a swing of 200 is
/// about 0.02 once min-max scaled on the training split.
pub fn scenario(seed: u64) -> SynthConfig {
    SynthConfig {
        length: SCENARIO_LENGTH,
        mean: 1000.0,
        amplitude: 100.0,
        period: 144.0,
        noise_sigma: 4.6,
        bursts: vec![Burst {
            start: BURST_START,
            duration: BURST_LEN,
            multiplier: 3.0,
        }],
        seed,
        interval_seconds: 600,
        start_time: 0,
    }
}
