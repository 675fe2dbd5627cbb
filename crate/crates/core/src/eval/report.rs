use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::metrics::{avg_daily_return, directional_accuracy, overall_return, rmse};
use crate::data::PriceSeries;
use crate::error::{Error, Result};

/// The four scores of one engine's forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineReport {
    pub label: String,
    pub forecast: PriceSeries,
    pub directional_accuracy: f64,
    pub rmse: f64,
    pub overall_return: f64,
    pub avg_daily_return: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub engines: Vec<EngineReport>,
    pub actual: PriceSeries,
    pub actual_overall_return: f64,
    pub actual_avg_daily_return: f64,
}

/// Scores each labelled forecast against `actual`.
pub fn compare(
    forecasts: &[(&str, &PriceSeries)],
    actual: &PriceSeries,
) -> Result<ComparisonReport> {
    let engines = forecasts
        .iter()
        .map(|&(label, forecast)| {
            Ok(EngineReport {
                label: label.to_string(),
                forecast: forecast.clone(),
                directional_accuracy: directional_accuracy(forecast, actual)?,
                rmse: rmse(forecast, actual)?,
                overall_return: overall_return(forecast)?,
                avg_daily_return: avg_daily_return(forecast)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport {
        engines,
        actual: actual.clone(),
        actual_overall_return: overall_return(actual)?,
        actual_avg_daily_return: avg_daily_return(actual)?,
    })
}

pub fn build_report(
    lstm: &PriceSeries,
    sarima: &PriceSeries,
    actual: &PriceSeries,
) -> Result<ComparisonReport> {
    compare(&[("lstm", lstm), ("sarima", sarima)], actual)
}

impl ComparisonReport {
    pub fn engine(&self, label: &str) -> Option<&EngineReport> {
        self.engines.iter().find(|e| e.label == label)
    }

    /// Flat `key=value` lines, one metric per line.
    pub fn metrics_text(&self) -> String {
        let mut out = String::new();
        for e in &self.engines {
            let _ = writeln!(
                out,
                "{}.directional_accuracy={}",
                e.label, e.directional_accuracy
            );
            let _ = writeln!(out, "{}.rmse={}", e.label, e.rmse);
            let _ = writeln!(out, "{}.overall_return={}", e.label, e.overall_return);
            let _ = writeln!(out, "{}.avg_daily_return={}", e.label, e.avg_daily_return);
        }
        let _ = writeln!(out, "actual.overall_return={}", self.actual_overall_return);
        let _ = writeln!(
            out,
            "actual.avg_daily_return={}",
            self.actual_avg_daily_return
        );
        let _ = writeln!(out, "n_forecasts={}", self.actual.len());
        out
    }

    /// Human-readable tables: direction accuracy, RMSE, overall return and
    /// average daily return, the last two with the actual index alongside.
    pub fn tables_text(&self) -> String {
        let (start, end) = match (self.actual.dates().first(), self.actual.dates().last()) {
            (Some(s), Some(e)) => (s.to_string(), e.to_string()),
            _ => (String::new(), String::new()),
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Table 1: accuracy in forecasting the direction of daily movements"
        );
        let _ = writeln!(out, "{:<16}{:>20}", "Method", "Predictive accuracy");
        for e in &self.engines {
            let _ = writeln!(out, "{:<16}{:>20.3}", e.label, e.directional_accuracy);
        }
        let _ = writeln!(out, "\nTable 2: RMSE of model forecasts (index points)");
        let _ = writeln!(out, "{:<16}{:>20}", "Method", "RMSE");
        for e in &self.engines {
            let _ = writeln!(out, "{:<16}{:>20.4}", e.label, e.rmse);
        }
        let _ = writeln!(out, "\nTable 3: forecast overall return, {start} to {end}");
        let _ = writeln!(out, "{:<16}{:>20}", "Method", "Overall return");
        for e in &self.engines {
            let _ = writeln!(out, "{:<16}{:>19.4}%", e.label, 100.0 * e.overall_return);
        }
        let _ = writeln!(
            out,
            "{:<16}{:>19.4}%",
            "actual",
            100.0 * self.actual_overall_return
        );
        let _ = writeln!(
            out,
            "\nTable 4: forecast average daily return, {start} to {end}"
        );
        let _ = writeln!(out, "{:<16}{:>20}", "Method", "Avg daily return");
        for e in &self.engines {
            let _ = writeln!(out, "{:<16}{:>20.6}", e.label, e.avg_daily_return);
        }
        let _ = writeln!(
            out,
            "{:<16}{:>20.6}",
            "actual", self.actual_avg_daily_return
        );
        out
    }

    /// `date,actual,forecast` rows for one engine.
    pub fn plot_csv(&self, engine: &EngineReport) -> String {
        let mut out = String::from("date,actual,forecast\n");
        for ((date, a), f) in self.actual.iter().zip(engine.forecast.closes()) {
            let _ = writeln!(out, "{date},{a},{f}");
        }
        out
    }

    /// Writes `metrics.txt`, `report.txt` and one `plot_<label>.csv` per
    /// engine into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        let mut files = vec![
            (dir.join("metrics.txt"), self.metrics_text()),
            (dir.join("report.txt"), self.tables_text()),
        ];
        for e in &self.engines {
            files.push((dir.join(format!("plot_{}.csv", e.label)), self.plot_csv(e)));
        }
        for (path, text) in &files {
            fs::write(path, text).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
        }
        Ok(files.into_iter().map(|(p, _)| p).collect())
    }
}
