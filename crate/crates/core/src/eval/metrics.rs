use crate::data::PriceSeries;
use crate::error::{Error, Result};

fn check_dates(forecast: &PriceSeries, actual: &PriceSeries) -> Result<()> {
    if forecast.dates() != actual.dates() {
        return Err(Error::DateMismatch(format!(
            "{} ({} dates) vs {} ({} dates)",
            forecast.name(),
            forecast.len(),
            actual.name(),
            actual.len()
        )));
    }
    Ok(())
}

/// Share of days `t ≥ 2` on which `sign(forecast_t − actual_{t−1})` equals
/// `sign(actual_t − actual_{t−1})`. A flat day is its own direction.
pub fn directional_accuracy(forecast: &PriceSeries, actual: &PriceSeries) -> Result<f64> {
    check_dates(forecast, actual)?;
    if actual.len() < 2 {
        return Err(Error::InsufficientData(
            "directional accuracy needs two days".into(),
        ));
    }
    let a = actual.closes();
    let f = forecast.closes();
    let hits = (1..a.len())
        .filter(|&t| direction(f[t] - a[t - 1]) == direction(a[t] - a[t - 1]))
        .count();
    Ok(hits as f64 / (a.len() - 1) as f64)
}

fn direction(change: f64) -> i8 {
    if change > 0.0 {
        1
    } else if change < 0.0 {
        -1
    } else {
        0
    }
}

/// Root mean squared error over the forecast dates.
pub fn rmse(forecast: &PriceSeries, actual: &PriceSeries) -> Result<f64> {
    check_dates(forecast, actual)?;
    if actual.is_empty() {
        return Err(Error::Empty("series"));
    }
    let sse: f64 = forecast
        .closes()
        .iter()
        .zip(actual.closes())
        .map(|(f, a)| (a - f).powi(2))
        .sum();
    Ok((sse / actual.len() as f64).sqrt())
}

/// `(last − first) / first`.
pub fn overall_return(series: &PriceSeries) -> Result<f64> {
    let v = series.closes();
    if v.len() < 2 {
        return Err(Error::InsufficientData(
            "overall return needs two values".into(),
        ));
    }
    if !(v[0] > 0.0) {
        return Err(Error::Numeric(format!(
            "{}: first value {} is not positive",
            series.name(),
            v[0]
        )));
    }
    Ok((v[v.len() - 1] - v[0]) / v[0])
}

/// The constant daily rate `i` with `(1 + i)^n = Π (1 + i_t)` over the
/// `n = len − 1` daily returns.
pub fn avg_daily_return(series: &PriceSeries) -> Result<f64> {
    let v = series.closes();
    if v.len() < 2 {
        return Err(Error::InsufficientData(
            "average daily return needs two values".into(),
        ));
    }
    if let Some((date, &value)) = series.dates().iter().zip(v).find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::NonPositiveClose { date: *date, value });
    }
    let growth: f64 = v.windows(2).map(|w| 1.0 + (w[1] - w[0]) / w[0]).product();
    let n = (v.len() - 1) as f64;
    Ok(growth.powf(1.0 / n) - 1.0)
}
