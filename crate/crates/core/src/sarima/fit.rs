use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::css::{css_residuals, expand_ar, expand_ma, is_stationary, nonzero_lags};
use super::diff::{difference, undifference};
use super::simplex::{minimize, SimplexOptions};
use super::spec::SarimaSpec;
use crate::error::{Error, Result};

/// Issues found while fitting that do not stop the fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FitWarning {
    /// Fewer than ten differenced observations per estimated parameter.
    SparseData {
        observations: usize,
        parameters: usize,
    },
    /// The differenced series is shorter than one season, so seasonal
    /// structure in the residuals cannot be checked.
    ShortSeasonalHistory { observations: usize, period: usize },
    /// The simplex hit its iteration cap; the best point found is kept.
    NotConverged { iterations: usize },
}

impl FitWarning {
    pub fn is_data_sufficiency(&self) -> bool {
        !matches!(self, FitWarning::NotConverged { .. })
    }
}

impl fmt::Display for FitWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitWarning::SparseData { observations, parameters } => write!(
                f,
                "data sufficiency: {observations} differenced observations for {parameters} parameters (fewer than 10 per parameter)"
            ),
            FitWarning::ShortSeasonalHistory { observations, period } => write!(
                f,
                "data sufficiency: {observations} differenced observations cover less than one season of {period}"
            ),
            FitWarning::NotConverged { iterations } => {
                write!(f, "optimizer stopped after {iterations} iterations without converging")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SarimaFit {
    pub spec: SarimaSpec,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub seasonal_phi: Vec<f64>,
    pub seasonal_theta: Vec<f64>,
    /// Mean of the differenced series.
    pub intercept: f64,
    /// The differenced series the ARMA part was fitted to.
    pub differenced: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `SSE / n`.
    pub sigma2: f64,
    pub aic: f64,
    /// Last `max(d + D·s + p, s)` observations of the original series.
    pub training_tail: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub warnings: Vec<FitWarning>,
}

impl SarimaFit {
    pub fn sse(&self) -> f64 {
        self.residuals.iter().map(|e| e * e).sum()
    }

    pub fn ar_polynomial(&self) -> Vec<f64> {
        expand_ar(&self.phi, &self.seasonal_phi, self.spec.period)
    }

    pub fn ma_polynomial(&self) -> Vec<f64> {
        expand_ma(&self.theta, &self.seasonal_theta, self.spec.period)
    }

    pub fn has_data_warning(&self) -> bool {
        self.warnings.iter().any(FitWarning::is_data_sufficiency)
    }

    /// All estimated ARMA coefficients in `φ, θ, Φ, Θ` order.
    pub fn coefficients(&self) -> Vec<f64> {
        [
            &self.phi[..],
            &self.theta,
            &self.seasonal_phi,
            &self.seasonal_theta,
        ]
        .concat()
    }
}

struct Layout {
    p: usize,
    q: usize,
    sp: usize,
    sq: usize,
    period: usize,
}

impl Layout {
    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64], &'a [f64], f64) {
        let (phi, rest) = x.split_at(self.p);
        let (theta, rest) = rest.split_at(self.q);
        let (sphi, rest) = rest.split_at(self.sp);
        let (stheta, rest) = rest.split_at(self.sq);
        (phi, theta, sphi, stheta, rest[0])
    }
}

/// Whether `1 + Σ θ_j z^j` has every root outside the unit circle.
fn is_invertible(theta: &[f64]) -> bool {
    let negated: Vec<f64> = theta.iter().map(|t| -t).collect();
    is_stationary(&negated)
}

/// Mean squared CSS residual for parameter vector `x`, or `+∞` outside the
/// stationary and invertible region.
fn css_objective(layout: &Layout, w: &[f64], x: &[f64]) -> f64 {
    let (phi, theta, sphi, stheta, mu) = layout.split(x);
    if !is_stationary(phi)
        || !is_stationary(sphi)
        || !is_invertible(theta)
        || !is_invertible(stheta)
    {
        return f64::INFINITY;
    }
    let ar = expand_ar(phi, sphi, layout.period);
    let ma = expand_ma(theta, stheta, layout.period);
    let e = css_residuals(&ar, &ma, mu, w);
    let sse: f64 = e.iter().map(|v| v * v).sum();
    if sse.is_finite() {
        sse / w.len() as f64
    } else {
        f64::INFINITY
    }
}

/// Fits `spec` to `series` by conditional sum of squares.
///
/// The differenced series is standardised before optimisation; the simplex
/// starts from zero ARMA coefficients and the sample mean.
pub fn fit(spec: SarimaSpec, series: &[f64]) -> Result<SarimaFit> {
    fit_with(spec, series, SimplexOptions::default())
}

pub fn fit_with(spec: SarimaSpec, series: &[f64], options: SimplexOptions) -> Result<SarimaFit> {
    spec.validate()?;
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("series contains non-finite values".into()));
    }
    let w = difference(series, spec.d, spec.seasonal_d, spec.period)?;
    let n = w.len();
    if n <= spec.arma_params() {
        return Err(Error::InsufficientData(format!(
            "{n} differenced observations for {} ARMA coefficients",
            spec.arma_params()
        )));
    }

    let mean = w.iter().sum::<f64>() / n as f64;
    let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
    let standardized: Vec<f64> = w.iter().map(|v| (v - mean) / sd).collect();

    let layout = Layout {
        p: spec.p,
        q: spec.q,
        sp: spec.seasonal_p,
        sq: spec.seasonal_q,
        period: spec.period,
    };
    let dim = spec.estimated_params();
    let start = vec![0.0; dim];
    let steps = vec![0.1; dim];
    let result = minimize(
        |x| css_objective(&layout, &standardized, x),
        &start,
        &steps,
        options,
    );
    if !result.f.is_finite() {
        return Err(Error::Numeric(format!(
            "no finite CSS objective found for {spec}"
        )));
    }

    let (phi, theta, sphi, stheta, mu_std) = layout.split(&result.x);
    if !is_stationary(phi) || !is_stationary(sphi) {
        return Err(Error::Numeric(format!(
            "non-stationary AR estimate for {spec}"
        )));
    }
    let intercept = mean + sd * mu_std;
    let residuals = css_residuals(
        &expand_ar(phi, sphi, spec.period),
        &expand_ma(theta, stheta, spec.period),
        intercept,
        &w,
    );
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = sse / n as f64;
    let aic = n as f64 * sigma2.ln() + 2.0 * (dim + 1) as f64;

    let mut warnings = Vec::new();
    if n < 10 * dim {
        warnings.push(FitWarning::SparseData {
            observations: n,
            parameters: dim,
        });
    }
    if spec.is_seasonal() && n < spec.period {
        warnings.push(FitWarning::ShortSeasonalHistory {
            observations: n,
            period: spec.period,
        });
    }
    if !result.converged {
        warnings.push(FitWarning::NotConverged {
            iterations: result.iterations,
        });
    }
    for warning in &warnings {
        log::warn!("SARIMA{spec}: {warning}");
    }

    let keep = (spec.differencing_lag() + spec.p)
        .max(spec.period)
        .min(series.len());
    Ok(SarimaFit {
        spec,
        phi: phi.to_vec(),
        theta: theta.to_vec(),
        seasonal_phi: sphi.to_vec(),
        seasonal_theta: stheta.to_vec(),
        intercept,
        differenced: w,
        residuals,
        sigma2,
        aic,
        training_tail: series[series.len() - keep..].to_vec(),
        converged: result.converged,
        iterations: result.iterations,
        warnings,
    })
}

/// Candidate non-seasonal orders for [`auto_fit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSearch {
    pub p: RangeInclusive<usize>,
    pub q: RangeInclusive<usize>,
}

impl OrderSearch {
    pub fn up_to(max_p: usize, max_q: usize) -> Self {
        Self {
            p: 0..=max_p,
            q: 0..=max_q,
        }
    }

    pub fn candidates(&self, template: SarimaSpec) -> Vec<SarimaSpec> {
        self.p
            .clone()
            .flat_map(|p| self.q.clone().map(move |q| SarimaSpec { p, q, ..template }))
            .collect()
    }
}

/// Fits every `(p, q)` in `search` (other orders from `template`) and
/// returns the converged fit with the lowest AIC. Ties go to fewer
/// parameters, then lower `q`.
pub fn auto_fit(series: &[f64], template: SarimaSpec, search: &OrderSearch) -> Result<SarimaFit> {
    let candidates = search.candidates(template);
    if candidates.is_empty() {
        return Err(Error::Config("empty order grid".into()));
    }
    let fits: Vec<SarimaFit> = candidates
        .par_iter()
        .map(|&spec| fit(spec, series))
        .collect::<Vec<_>>()
        .into_iter()
        .filter_map(|r| match r {
            Ok(f) if f.converged && f.aic.is_finite() => Some(f),
            Ok(f) => {
                log::info!("auto_fit: dropping unconverged SARIMA{}", f.spec);
                None
            }
            Err(e) => {
                log::info!("auto_fit: candidate failed: {e}");
                None
            }
        })
        .collect();
    fits.into_iter()
        .min_by(|a, b| {
            a.aic
                .total_cmp(&b.aic)
                .then(a.spec.arma_params().cmp(&b.spec.arma_params()))
                .then(a.spec.q.cmp(&b.spec.q))
        })
        .ok_or_else(|| Error::Numeric("no candidate order converged".into()))
}

/// Multi-step forecast in original units. Future shocks are zero and future
/// differenced values are replaced by their own forecasts.
pub fn forecast(fit: &SarimaFit, horizon: usize) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::Config("forecast horizon must be at least 1".into()));
    }
    let ar = nonzero_lags(&fit.ar_polynomial());
    let ma = nonzero_lags(&fit.ma_polynomial());
    let mu = fit.intercept;
    let n = fit.differenced.len();

    let mut w: Vec<f64> = fit.differenced.clone();
    let mut e: Vec<f64> = fit.residuals.clone();
    w.reserve(horizon);
    e.resize(n + horizon, 0.0);
    for t in n..n + horizon {
        let mut value = mu;
        for &(lag, c) in &ar {
            if lag > t {
                break;
            }
            value += c * (w[t - lag] - mu);
        }
        for &(lag, c) in &ma {
            if lag > t {
                break;
            }
            value += c * e[t - lag];
        }
        w.push(value);
    }
    let spec = fit.spec;
    undifference(
        &w[n..],
        &fit.training_tail,
        spec.d,
        spec.seasonal_d,
        spec.period,
    )
}
