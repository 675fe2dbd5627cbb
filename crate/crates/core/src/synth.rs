//! Seeded synthetic index pair standing in for real market data.
//!
//! The primary index is a geometric random walk with drift multiplied by a
//! sinusoidal seasonal factor, on a weekday calendar. The secondary index is
//! a random walk whose shocks have correlation `correlation` with the
//! primary's, observed on a calendar that starts one weekday earlier and
//! randomly skips days.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{write_csv, PriceSeries};
use crate::error::{Error, Result};

/// Fewest days that leave the default seasonal model something to fit.
pub const MIN_DAYS: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegimeParams {
    pub start_date: NaiveDate,
    pub primary_start: f64,
    /// Daily log drift.
    pub drift: f64,
    /// Daily log volatility.
    pub volatility: f64,
    /// Relative size of the seasonal swing, in `[0, 1)`.
    pub seasonal_amplitude: f64,
    /// Seasonal cycle length in trading days.
    pub seasonal_period: f64,
    pub secondary_start: f64,
    pub secondary_drift: f64,
    pub secondary_volatility: f64,
    /// Correlation of the two indices' daily shocks.
    pub correlation: f64,
    /// Chance that the secondary market has no close on a given day.
    pub drop_probability: f64,
}

impl Default for RegimeParams {
    fn default() -> Self {
        Self {
            start_date: NaiveDate::from_ymd_opt(2015, 12, 15).expect("valid date"),
            primary_start: 50_000.0,
            drift: 0.0002,
            volatility: 0.01,
            seasonal_amplitude: 0.03,
            seasonal_period: 250.0,
            secondary_start: 3_000.0,
            secondary_drift: 0.0001,
            secondary_volatility: 0.012,
            correlation: 0.3,
            drop_probability: 0.05,
        }
    }
}

impl RegimeParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("invalid regime: {what}")));
        if !(self.primary_start > 0.0) || !(self.secondary_start > 0.0) {
            return bad("starting levels must be positive");
        }
        if !(self.volatility >= 0.0) || !(self.secondary_volatility >= 0.0) {
            return bad("volatilities must be non-negative");
        }
        if !self.drift.is_finite() || !self.secondary_drift.is_finite() {
            return bad("drifts must be finite");
        }
        if !(0.0..1.0).contains(&self.seasonal_amplitude) {
            return bad("seasonal_amplitude must lie in [0, 1)");
        }
        if !(self.seasonal_period > 0.0) {
            return bad("seasonal_period must be positive");
        }
        if !(-1.0..=1.0).contains(&self.correlation) {
            return bad("correlation must lie in [-1, 1]");
        }
        if !(0.0..1.0).contains(&self.drop_probability) {
            return bad("drop_probability must lie in [0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub primary: PriceSeries,
    pub secondary: PriceSeries,
}

fn next_weekday(mut d: NaiveDate) -> NaiveDate {
    while matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
        d += Duration::days(1);
    }
    d
}

fn prev_weekday(d: NaiveDate) -> NaiveDate {
    let mut d = d - Duration::days(1);
    while matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
        d -= Duration::days(1);
    }
    d
}

pub fn generate_synthetic(
    seed: u64,
    n_days: usize,
    params: &RegimeParams,
) -> Result<SyntheticData> {
    params.validate()?;
    if n_days < MIN_DAYS {
        return Err(Error::Config(format!(
            "at least {MIN_DAYS} days are needed, got {n_days}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut dates = Vec::with_capacity(n_days);
    let mut d = next_weekday(params.start_date);
    for _ in 0..n_days {
        dates.push(d);
        d = next_weekday(d + Duration::days(1));
    }

    let mix = (1.0 - params.correlation * params.correlation).sqrt();
    let mut log_p = params.primary_start.ln();
    let mut log_s = params.secondary_start.ln();
    let mut primary = Vec::with_capacity(n_days);
    let mut sec_dates = vec![prev_weekday(dates[0])];
    let mut sec_closes = vec![params.secondary_start];

    for (i, &date) in dates.iter().enumerate() {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let dropped = rng.random::<f64>() < params.drop_probability;
        if i > 0 {
            log_p += params.drift + params.volatility * z1;
        }
        log_s += params.secondary_drift
            + params.secondary_volatility * (params.correlation * z1 + mix * z2);
        let season =
            1.0 + params.seasonal_amplitude * (2.0 * PI * i as f64 / params.seasonal_period).sin();
        primary.push(log_p.exp() * season);
        if !dropped {
            sec_dates.push(date);
            sec_closes.push(log_s.exp());
        }
    }

    Ok(SyntheticData {
        primary: PriceSeries::new("primary", dates, primary)?,
        secondary: PriceSeries::new("secondary", sec_dates, sec_closes)?,
    })
}

/// Writes `primary.csv` and `secondary.csv` into `dir`.
pub fn write_synthetic(data: &SyntheticData, dir: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let p = dir.join("primary.csv");
    let s = dir.join("secondary.csv");
    write_csv(&p, &data.primary, "close")?;
    write_csv(&s, &data.secondary, "close")?;
    Ok((p, s))
}
