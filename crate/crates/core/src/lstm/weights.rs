use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_HORIZONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Input,
    Forget,
    Output,
    Candidate,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::Input, Gate::Forget, Gate::Output, Gate::Candidate];
}

/// Parameters of one gate: `pre = w * x + u . h + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    /// Input weights, length H.
    pub w: Vec<f64>,
    /// Recurrent weights, H x H row-major (`u[j * H + k]` maps `h[k]` into unit `j`).
    pub u: Vec<f64>,
    pub b: Vec<f64>,
}

impl GateParams {
    fn zeros(hidden: usize) -> Self {
        Self {
            w: vec![0.0; hidden],
            u: vec![0.0; hidden * hidden],
            b: vec![0.0; hidden],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmWeights {
    pub hidden: usize,
    pub horizons: usize,
    pub input: GateParams,
    pub forget: GateParams,
    pub output: GateParams,
    pub candidate: GateParams,
    /// Output layer, L x H row-major.
    pub v: Vec<f64>,
    /// Output bias, length L.
    pub c: Vec<f64>,
}

impl LstmWeights {
    pub fn zeros(hidden: usize, horizons: usize) -> Result<Self> {
        if hidden == 0 {
            return Err(Error::invalid("hidden size must be at least 1"));
        }
        if !(1..=MAX_HORIZONS).contains(&horizons) {
            return Err(Error::invalid(format!(
                "horizons must be in 1..={MAX_HORIZONS}, got {horizons}"
            )));
        }
        Ok(Self {
            hidden,
            horizons,
            input: GateParams::zeros(hidden),
            forget: GateParams::zeros(hidden),
            output: GateParams::zeros(hidden),
            candidate: GateParams::zeros(hidden),
            v: vec![0.0; horizons * hidden],
            c: vec![0.0; horizons],
        })
    }

    /// Every parameter drawn uniformly from `[-scale, scale]`, in `arrays()` order.
    pub fn random<R: Rng + ?Sized>(
        hidden: usize,
        horizons: usize,
        scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut weights = Self::zeros(hidden, horizons)?;
        if scale > 0.0 {
            for array in weights.arrays_mut() {
                for p in array.iter_mut() {
                    *p = rng.gen_range(-scale..=scale);
                }
            }
        }
        Ok(weights)
    }

    pub fn gate(&self, gate: Gate) -> &GateParams {
        match gate {
            Gate::Input => &self.input,
            Gate::Forget => &self.forget,
            Gate::Output => &self.output,
            Gate::Candidate => &self.candidate,
        }
    }

    pub fn gate_mut(&mut self, gate: Gate) -> &mut GateParams {
        match gate {
            Gate::Input => &mut self.input,
            Gate::Forget => &mut self.forget,
            Gate::Output => &mut self.output,
            Gate::Candidate => &mut self.candidate,
        }
    }

    /// All parameter arrays in a fixed order.
    pub fn arrays(&self) -> [&[f64]; 14] {
        [
            &self.input.w,
            &self.input.u,
            &self.input.b,
            &self.forget.w,
            &self.forget.u,
            &self.forget.b,
            &self.output.w,
            &self.output.u,
            &self.output.b,
            &self.candidate.w,
            &self.candidate.u,
            &self.candidate.b,
            &self.v,
            &self.c,
        ]
    }

    pub fn arrays_mut(&mut self) -> [&mut Vec<f64>; 14] {
        [
            &mut self.input.w,
            &mut self.input.u,
            &mut self.input.b,
            &mut self.forget.w,
            &mut self.forget.u,
            &mut self.forget.b,
            &mut self.output.w,
            &mut self.output.u,
            &mut self.output.b,
            &mut self.candidate.w,
            &mut self.candidate.u,
            &mut self.candidate.b,
            &mut self.v,
            &mut self.c,
        ]
    }

    pub fn param_count(&self) -> usize {
        self.arrays().iter().map(|a| a.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.arrays()
            .iter()
            .all(|a| a.iter().all(|p| p.is_finite()))
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.hidden == other.hidden && self.horizons == other.horizons
    }

    /// Checks dimensions and finiteness, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        let reference = Self::zeros(self.hidden, self.horizons)?;
        let shapes_match = self
            .arrays()
            .iter()
            .zip(reference.arrays().iter())
            .all(|(a, b)| a.len() == b.len());
        if !shapes_match {
            return Err(Error::invalid(
                "parameter array lengths do not match hidden/horizons",
            ));
        }
        if !self.is_finite() {
            return Err(Error::invalid("non-finite parameter"));
        }
        Ok(())
    }
}

/// Recurrent state `(h, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl LstmState {
    pub fn zeros(hidden: usize) -> Self {
        Self {
            h: vec![0.0; hidden],
            c: vec![0.0; hidden],
        }
    }
}
