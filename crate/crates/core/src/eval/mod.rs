//! Forecast scoring: directional accuracy, RMSE, overall return and
//! equivalent average daily return, plus the comparison report.

mod metrics;
mod report;

pub use metrics::{avg_daily_return, directional_accuracy, overall_return, rmse};
pub use report::{build_report, compare, ComparisonReport, EngineReport};
