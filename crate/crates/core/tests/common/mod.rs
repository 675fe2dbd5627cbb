#![allow(dead_code)]

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use tsforge::data::{AlignedDataset, PriceSeries};
use tsforge::lstm::{backward_through_time, forward_sequence, LstmParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// ARMA(p, q) with unit-variance shocks, `x_t = Σ φ x + e_t + Σ θ e`,
/// after discarding a burn-in.
pub fn simulate_arma(seed: u64, phi: &[f64], theta: &[f64], mean: f64, n: usize) -> Vec<f64> {
    let burn = 500;
    let mut r = rng(seed);
    let e = normals(&mut r, n + burn);
    let mut x = vec![0.0; n + burn];
    for t in 0..n + burn {
        let mut v = e[t];
        for (i, p) in phi.iter().enumerate() {
            if t > i {
                v += p * x[t - i - 1];
            }
        }
        for (j, q) in theta.iter().enumerate() {
            if t > j {
                v += q * e[t - j - 1];
            }
        }
        x[t] = v;
    }
    x[burn..].iter().map(|v| v + mean).collect()
}

pub fn daily_dates(n: usize) -> Vec<NaiveDate> {
    let start = NaiveDate::from_ymd_opt(2016, 1, 4).unwrap();
    (0..n).map(|i| start + Duration::days(i as i64)).collect()
}

pub fn series(values: &[f64]) -> PriceSeries {
    PriceSeries::forecast("s", daily_dates(values.len()), values.to_vec()).unwrap()
}

/// Noiseless sine of the given period, shifted to stay positive, as a
/// single-feature dataset split after `train` rows.
pub fn sine_dataset(period: f64, train: usize, test: usize, lookback: usize) -> AlignedDataset {
    let n = train + test;
    let values: Vec<f64> = (0..n)
        .map(|i| 2.0 + (2.0 * std::f64::consts::PI * i as f64 / period).sin())
        .collect();
    AlignedDataset::from_columns(daily_dates(n), vec![values], train, lookback).unwrap()
}

/// Parameters with every entry, biases included, uniform in `±scale`.
pub fn random_params(rng: &mut ChaCha8Rng, hidden: usize, input: usize, scale: f64) -> LstmParams {
    let mut p = LstmParams::zeros(hidden, input);
    for v in p.as_mut_slice() {
        *v = rng.random_range(-scale..scale);
    }
    p
}

/// Checks `|a − n| ≤ rel · max(|a|, |n|)` for every parameter whose
/// gradient magnitude reaches `abs_floor`; smaller ones only need to agree
/// to within `abs_floor`. Returns the worst relative error and the number of
/// violations.
pub fn gradient_check(
    params: &LstmParams,
    window: &[f64],
    upstream: f64,
    h: f64,
    rel: f64,
    abs_floor: f64,
) -> (f64, usize) {
    let trace = forward_sequence(params, window).unwrap();
    let analytic = backward_through_time(params, &trace, upstream).unwrap();
    let mut worst = 0.0_f64;
    let mut violations = 0;
    for k in 0..params.len() {
        let mut plus = params.clone();
        plus.as_mut_slice()[k] += h;
        let mut minus = params.clone();
        minus.as_mut_slice()[k] -= h;
        let fp = upstream * forward_sequence(&plus, window).unwrap().prediction;
        let fm = upstream * forward_sequence(&minus, window).unwrap().prediction;
        let numeric = (fp - fm) / (2.0 * h);
        let a = analytic.as_slice()[k];
        let diff = (a - numeric).abs();
        let size = a.abs().max(numeric.abs());
        if size < abs_floor {
            violations += (diff > abs_floor) as usize;
            continue;
        }
        let r = diff / size;
        worst = worst.max(r);
        if r > rel {
            violations += 1;
        }
    }
    (worst, violations)
}

pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}
