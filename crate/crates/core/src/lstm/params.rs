use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four gates of the cell, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    /// Forget gate, sigmoid.
    Forget,
    /// Input gate, sigmoid.
    Input,
    /// Candidate cell values (input modulation), tanh.
    Candidate,
    /// Output gate, sigmoid.
    Output,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::Forget, Gate::Input, Gate::Candidate, Gate::Output];

    fn index(self) -> usize {
        self as usize
    }
}

/// All trainable values of the network in one flat buffer.
///
/// Layout: the four gate matrices (each `hidden × (hidden + input)`,
/// row-major, acting on `[h_prev, x]`), then the four gate biases, then the
/// read-out weights and the read-out bias. Gradients and Adam moments use
/// the same type, so their shapes always agree with the parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmParams {
    hidden: usize,
    input: usize,
    data: Vec<f64>,
}

impl LstmParams {
    pub fn zeros(hidden: usize, input: usize) -> Self {
        Self {
            hidden,
            input,
            data: vec![0.0; Self::len_for(hidden, input)],
        }
    }

    /// Weights uniform in `[-k, k]` with `k = 1/sqrt(hidden + input)`;
    /// biases start at zero.
    pub fn init_uniform<R: Rng + ?Sized>(hidden: usize, input: usize, rng: &mut R) -> Self {
        let mut p = Self::zeros(hidden, input);
        let k = 1.0 / ((hidden + input) as f64).sqrt();
        for w in p.stacked_weights_mut() {
            *w = rng.random_range(-k..=k);
        }
        for w in p.readout_weights_mut() {
            *w = rng.random_range(-k..=k);
        }
        p
    }

    pub fn from_vec(hidden: usize, input: usize, data: Vec<f64>) -> Result<Self> {
        let expected = Self::len_for(hidden, input);
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "hidden={hidden}, input={input} needs {expected} values, got {}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite parameter".into()));
        }
        Ok(Self {
            hidden,
            input,
            data,
        })
    }

    fn len_for(hidden: usize, input: usize) -> usize {
        4 * hidden * (hidden + input) + 4 * hidden + hidden + 1
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn input(&self) -> usize {
        self.input
    }

    /// Width of the concatenated `[h_prev, x]` vector.
    pub fn concat(&self) -> usize {
        self.hidden + self.input
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.hidden == other.hidden && self.input == other.input && self.len() == other.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn weights_end(&self) -> usize {
        4 * self.hidden * self.concat()
    }

    fn biases_end(&self) -> usize {
        self.weights_end() + 4 * self.hidden
    }

    /// All four gate matrices stacked as a `4·hidden × concat` matrix.
    pub fn stacked_weights(&self) -> &[f64] {
        &self.data[..self.weights_end()]
    }

    pub fn stacked_weights_mut(&mut self) -> &mut [f64] {
        let end = self.weights_end();
        &mut self.data[..end]
    }

    pub fn stacked_biases(&self) -> &[f64] {
        &self.data[self.weights_end()..self.biases_end()]
    }

    pub fn stacked_biases_mut(&mut self) -> &mut [f64] {
        let (a, b) = (self.weights_end(), self.biases_end());
        &mut self.data[a..b]
    }

    pub fn weights(&self, gate: Gate) -> &[f64] {
        let block = self.hidden * self.concat();
        &self.stacked_weights()[gate.index() * block..(gate.index() + 1) * block]
    }

    pub fn weights_mut(&mut self, gate: Gate) -> &mut [f64] {
        let block = self.hidden * self.concat();
        &mut self.stacked_weights_mut()[gate.index() * block..(gate.index() + 1) * block]
    }

    pub fn bias(&self, gate: Gate) -> &[f64] {
        let h = self.hidden;
        &self.stacked_biases()[gate.index() * h..(gate.index() + 1) * h]
    }

    pub fn bias_mut(&mut self, gate: Gate) -> &mut [f64] {
        let h = self.hidden;
        &mut self.stacked_biases_mut()[gate.index() * h..(gate.index() + 1) * h]
    }

    pub fn readout_weights(&self) -> &[f64] {
        &self.data[self.biases_end()..self.biases_end() + self.hidden]
    }

    pub fn readout_weights_mut(&mut self) -> &mut [f64] {
        let start = self.biases_end();
        &mut self.data[start..start + self.hidden]
    }

    pub fn readout_bias(&self) -> f64 {
        self.data[self.data.len() - 1]
    }

    pub fn set_readout_bias(&mut self, value: f64) {
        let last = self.data.len() - 1;
        self.data[last] = value;
    }

    pub(crate) fn readout_bias_mut(&mut self) -> &mut f64 {
        self.data
            .last_mut()
            .expect("parameter buffer is never empty")
    }

    pub fn fill(&mut self, value: f64) {
        self.data.fill(value);
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|v| *v *= factor);
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
