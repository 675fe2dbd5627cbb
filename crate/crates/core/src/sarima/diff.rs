use crate::error::{Error, Result};

/// Applies `(1 − B)^d (1 − B^s)^D`. The output is `d + D·s` shorter.
pub fn difference(series: &[f64], d: usize, seasonal_d: usize, period: usize) -> Result<Vec<f64>> {
    let lag = d + seasonal_d * period;
    if series.len() <= lag {
        return Err(Error::InsufficientData(format!(
            "{} observations cannot be differenced {lag} steps",
            series.len()
        )));
    }
    if seasonal_d > 0 && period == 0 {
        return Err(Error::Config("seasonal differencing needs a period".into()));
    }
    let mut out = series.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    for _ in 0..seasonal_d {
        out = out
            .iter()
            .skip(period)
            .zip(&out)
            .map(|(a, b)| a - b)
            .collect();
    }
    Ok(out)
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Integrates values of the differenced series back to the original scale,
/// continuing from `tail`, the most recent original observations (at least
/// `d + D·s` of them).
pub fn undifference(
    differenced: &[f64],
    tail: &[f64],
    d: usize,
    seasonal_d: usize,
    period: usize,
) -> Result<Vec<f64>> {
    let lag = d + seasonal_d * period;
    if tail.len() < lag {
        return Err(Error::InsufficientData(format!(
            "undifferencing needs {lag} past observations, got {}",
            tail.len()
        )));
    }
    // Undo the lag-1 and lag-s steps one at a time, last applied first.
    // Each level of the tail is differenced exactly as the forward pass did,
    // so `(x − x_lag) + x_lag` usually recovers `x` to the bit and rounding
    // does not pile up through the integrations.
    let steps: Vec<usize> = std::iter::repeat_n(1, d)
        .chain(std::iter::repeat_n(period, seasonal_d))
        .collect();
    let mut levels = vec![tail[tail.len() - lag..].to_vec()];
    for &step in &steps[..steps.len().saturating_sub(1)] {
        let prev = levels.last().expect("non-empty");
        let next = prev
            .iter()
            .skip(step)
            .zip(prev)
            .map(|(a, b)| a - b)
            .collect();
        levels.push(next);
    }
    let mut current = differenced.to_vec();
    for (level, &step) in levels.iter().zip(&steps).rev() {
        let mut history = level[level.len() - step..].to_vec();
        history.reserve(current.len());
        for &v in &current {
            let x = v + history[history.len() - step];
            history.push(x);
        }
        current = history.split_off(step);
    }
    Ok(current)
}
