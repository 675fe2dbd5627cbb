use super::activation::{sigmoid, tanh_act};
use super::params::LstmParams;
use crate::error::{Error, Result};

/// Hidden output `h` and internal cell state `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl CellState {
    pub fn zeros(hidden: usize) -> Self {
        Self {
            h: vec![0.0; hidden],
            c: vec![0.0; hidden],
        }
    }
}

/// Intermediates of one cell step kept for the backward pass.
#[derive(Debug, Clone)]
pub struct StepCache {
    /// `[h_prev, x]`
    pub z: Vec<f64>,
    /// Post-activation gate values, stacked `[f, i, c', o]`.
    pub gates: Vec<f64>,
    pub c_prev: Vec<f64>,
    pub tanh_c: Vec<f64>,
}

impl StepCache {
    fn block(&self, k: usize) -> &[f64] {
        let h = self.c_prev.len();
        &self.gates[k * h..(k + 1) * h]
    }

    pub fn forget(&self) -> &[f64] {
        self.block(0)
    }

    pub fn input(&self) -> &[f64] {
        self.block(1)
    }

    pub fn candidate(&self) -> &[f64] {
        self.block(2)
    }

    pub fn output(&self) -> &[f64] {
        self.block(3)
    }
}

/// One step of the cell:
///
/// ```text
/// f  = σ(W_f·[h_prev, x] + b_f)
/// i  = σ(W_i·[h_prev, x] + b_i)
/// c' = tanh(W_C·[h_prev, x] + b_C)
/// c  = f ⊙ c_prev + i ⊙ c'
/// o  = σ(W_o·[h_prev, x] + b_o)
/// h  = o ⊙ tanh(c)
/// ```
pub fn lstm_cell_forward(
    params: &LstmParams,
    x: &[f64],
    prev: &CellState,
) -> Result<(CellState, StepCache)> {
    let hidden = params.hidden();
    if x.len() != params.input() {
        return Err(Error::Shape(format!(
            "input of length {} for a cell expecting {}",
            x.len(),
            params.input()
        )));
    }
    if prev.h.len() != hidden || prev.c.len() != hidden {
        return Err(Error::Shape(format!("state does not have {hidden} units")));
    }

    let mut z = Vec::with_capacity(params.concat());
    z.extend_from_slice(&prev.h);
    z.extend_from_slice(x);

    let width = params.concat();
    let weights = params.stacked_weights();
    let mut gates: Vec<f64> = params
        .stacked_biases()
        .iter()
        .zip(weights.chunks_exact(width))
        .map(|(b, row)| b + dot(row, &z))
        .collect();
    for (k, g) in gates.iter_mut().enumerate() {
        *g = if k / hidden == 2 {
            tanh_act(*g)
        } else {
            sigmoid(*g)
        };
    }

    let mut c = vec![0.0; hidden];
    let mut h = vec![0.0; hidden];
    let mut tanh_c = vec![0.0; hidden];
    for j in 0..hidden {
        let (f, i, g, o) = (
            gates[j],
            gates[hidden + j],
            gates[2 * hidden + j],
            gates[3 * hidden + j],
        );
        c[j] = f * prev.c[j] + i * g;
        tanh_c[j] = tanh_act(c[j]);
        h[j] = o * tanh_c[j];
    }

    let cache = StepCache {
        z,
        gates,
        c_prev: prev.c.clone(),
        tanh_c,
    };
    Ok((CellState { h, c }, cache))
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Everything a forward pass over one window produced.
#[derive(Debug, Clone)]
pub struct SequenceTrace {
    pub steps: Vec<StepCache>,
    pub last: CellState,
    /// Read-out of the final hidden state, in scaled units.
    pub prediction: f64,
}

/// Runs the cell over a row-major `steps × input` window from a zero state
/// and reads out `W_out·h_L + b_out`.
pub fn forward_sequence(params: &LstmParams, window: &[f64]) -> Result<SequenceTrace> {
    let input = params.input();
    if window.is_empty() || !window.len().is_multiple_of(input) {
        return Err(Error::Shape(format!(
            "window of {} values is not a whole number of {input}-feature rows",
            window.len()
        )));
    }
    let mut state = CellState::zeros(params.hidden());
    let mut steps = Vec::with_capacity(window.len() / input);
    for x in window.chunks_exact(input) {
        let (next, cache) = lstm_cell_forward(params, x, &state)?;
        steps.push(cache);
        state = next;
    }
    let prediction = params.readout_bias() + dot(params.readout_weights(), &state.h);
    Ok(SequenceTrace {
        steps,
        last: state,
        prediction,
    })
}

/// Gradient of a loss with respect to every parameter, given the loss
/// gradient `d_prediction` at the read-out of `trace`.
pub fn backward_through_time(
    params: &LstmParams,
    trace: &SequenceTrace,
    d_prediction: f64,
) -> Result<LstmParams> {
    let mut grads = LstmParams::zeros(params.hidden(), params.input());
    accumulate_gradients(params, trace, d_prediction, &mut grads)?;
    Ok(grads)
}

/// Adds this sequence's parameter gradients into `grads`.
pub(crate) fn accumulate_gradients(
    params: &LstmParams,
    trace: &SequenceTrace,
    d_prediction: f64,
    grads: &mut LstmParams,
) -> Result<()> {
    let hidden = params.hidden();
    let width = params.concat();
    if !grads.same_shape(params) {
        return Err(Error::Shape(
            "gradient buffer does not match parameters".into(),
        ));
    }
    if trace.last.h.len() != hidden
        || trace
            .steps
            .iter()
            .any(|s| s.z.len() != width || s.gates.len() != 4 * hidden)
    {
        return Err(Error::Shape(
            "trace was not produced by these parameters".into(),
        ));
    }
    if d_prediction == 0.0 {
        return Ok(());
    }

    *grads.readout_bias_mut() += d_prediction;
    for (g, h) in grads.readout_weights_mut().iter_mut().zip(&trace.last.h) {
        *g += d_prediction * h;
    }

    let mut dh: Vec<f64> = params
        .readout_weights()
        .iter()
        .map(|w| d_prediction * w)
        .collect();
    let mut dc = vec![0.0; hidden];
    let mut d_pre = vec![0.0; 4 * hidden];
    let weights = params.stacked_weights();

    for step in trace.steps.iter().rev() {
        let (f, i, g, o) = (step.forget(), step.input(), step.candidate(), step.output());
        for j in 0..hidden {
            let do_ = dh[j] * step.tanh_c[j];
            dc[j] += dh[j] * o[j] * (1.0 - step.tanh_c[j] * step.tanh_c[j]);
            let df = dc[j] * step.c_prev[j];
            let di = dc[j] * g[j];
            let dg = dc[j] * i[j];
            d_pre[j] = df * f[j] * (1.0 - f[j]);
            d_pre[hidden + j] = di * i[j] * (1.0 - i[j]);
            d_pre[2 * hidden + j] = dg * (1.0 - g[j] * g[j]);
            d_pre[3 * hidden + j] = do_ * o[j] * (1.0 - o[j]);
            dc[j] *= f[j];
        }

        for (b, d) in grads.stacked_biases_mut().iter_mut().zip(&d_pre) {
            *b += d;
        }
        for (row, &d) in grads
            .stacked_weights_mut()
            .chunks_exact_mut(width)
            .zip(&d_pre)
        {
            if d != 0.0 {
                for (w, z) in row.iter_mut().zip(&step.z) {
                    *w += d * z;
                }
            }
        }

        dh.fill(0.0);
        for (row, &d) in weights.chunks_exact(width).zip(&d_pre) {
            if d != 0.0 {
                for (acc, w) in dh.iter_mut().zip(&row[..hidden]) {
                    *acc += d * w;
                }
            }
        }
    }
    Ok(())
}
