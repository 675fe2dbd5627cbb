use std::fmt::Write as _;

use super::fit::SarimaFit;
use super::special::chi_square_sf;
use crate::error::{Error, Result};

/// Sample autocorrelations. Element `k` is lag `k`, so the first element is
/// always 1.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if max_lag >= n {
        return Err(Error::InsufficientData(format!(
            "lag {max_lag} needs more than {n} observations"
        )));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let denom: f64 = dev.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return Err(Error::Numeric(
            "autocorrelation of a constant series".into(),
        ));
    }
    Ok((0..=max_lag)
        .map(|k| dev.iter().zip(&dev[k..]).map(|(a, b)| a * b).sum::<f64>() / denom)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBox {
    pub lags: usize,
    pub dof: usize,
    pub statistic: f64,
    pub p_value: f64,
}

/// Ljung–Box portmanteau test over lags `1..=lags`, with `lags − fitted`
/// chi-square degrees of freedom.
pub fn ljung_box(residuals: &[f64], lags: usize, fitted: usize) -> Result<LjungBox> {
    if lags <= fitted {
        return Err(Error::Config(format!(
            "Ljung-Box needs more lags ({lags}) than fitted parameters ({fitted})"
        )));
    }
    let n = residuals.len();
    if n <= lags {
        return Err(Error::InsufficientData(format!(
            "{n} residuals for {lags} lags"
        )));
    }
    ljung_box_from_acf(&acf(residuals, lags)?, n, lags, fitted)
}

/// As [`ljung_box`], from precomputed autocorrelations (`acf[k]` at lag `k`)
/// of a series of length `n`.
pub fn ljung_box_from_acf(acf: &[f64], n: usize, lags: usize, fitted: usize) -> Result<LjungBox> {
    if lags <= fitted {
        return Err(Error::Config(format!(
            "Ljung-Box needs more lags ({lags}) than fitted parameters ({fitted})"
        )));
    }
    if acf.len() <= lags || n <= lags {
        return Err(Error::InsufficientData(format!(
            "autocorrelations up to lag {lags} needed"
        )));
    }
    let nf = n as f64;
    let sum: f64 = (1..=lags).map(|j| acf[j] * acf[j] / (nf - j as f64)).sum();
    let statistic = nf * (nf + 2.0) * sum;
    let dof = lags - fitted;
    Ok(LjungBox {
        lags,
        dof,
        statistic,
        p_value: chi_square_sf(statistic, dof)?,
    })
}

/// Residuals divided by `√σ²`.
pub fn standardized_residuals(fit: &SarimaFit) -> Result<Vec<f64>> {
    if !(fit.sigma2 > 0.0) {
        return Err(Error::Numeric("zero residual variance".into()));
    }
    let sd = fit.sigma2.sqrt();
    Ok(fit.residuals.iter().map(|e| e / sd).collect())
}

pub const SUMMARY_LJUNG_BOX_LAGS: [usize; 4] = [5, 10, 15, 20];

/// Key-value text block describing a fit.
pub fn fit_summary(fit: &SarimaFit) -> String {
    let mut out = String::new();
    let spec = fit.spec;
    let _ = writeln!(out, "spec={spec}");
    let _ = writeln!(
        out,
        "order.p={}\norder.d={}\norder.q={}",
        spec.p, spec.d, spec.q
    );
    let _ = writeln!(
        out,
        "seasonal.p={}\nseasonal.d={}\nseasonal.q={}\nseasonal.period={}",
        spec.seasonal_p, spec.seasonal_d, spec.seasonal_q, spec.period
    );
    let groups = [
        ("ar", &fit.phi),
        ("ma", &fit.theta),
        ("seasonal_ar", &fit.seasonal_phi),
        ("seasonal_ma", &fit.seasonal_theta),
    ];
    for (name, coefs) in groups {
        for (k, c) in coefs.iter().enumerate() {
            let _ = writeln!(out, "{name}.{}={c}", k + 1);
        }
    }
    let _ = writeln!(out, "intercept={}", fit.intercept);
    let _ = writeln!(out, "sigma2={}", fit.sigma2);
    let _ = writeln!(out, "aic={}", fit.aic);
    let _ = writeln!(out, "n_residuals={}", fit.residuals.len());
    let _ = writeln!(out, "converged={}", fit.converged);
    let _ = writeln!(out, "iterations={}", fit.iterations);
    for lags in SUMMARY_LJUNG_BOX_LAGS {
        match ljung_box(&fit.residuals, lags, spec.arma_params()) {
            Ok(lb) => {
                let _ = writeln!(out, "ljung_box.{lags}.statistic={}", lb.statistic);
                let _ = writeln!(out, "ljung_box.{lags}.dof={}", lb.dof);
                let _ = writeln!(out, "ljung_box.{lags}.p_value={}", lb.p_value);
            }
            Err(_) => {
                let _ = writeln!(out, "ljung_box.{lags}=undefined");
            }
        }
    }
    for (k, w) in fit.warnings.iter().enumerate() {
        let _ = writeln!(out, "warning.{}={w}", k + 1);
    }
    out
}
