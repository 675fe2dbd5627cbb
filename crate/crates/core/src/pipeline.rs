//! End-to-end runs: load, align, split, train and fit, forecast, score, and
//! write every artifact into the output directory.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{ConfigFile, Overrides, RunConfig};
use crate::data::{
    align_calendars, load_csv, make_windows, write_csv, AlignedDataset, AlignedTable, PriceSeries,
};
use crate::error::{Error, Result};
use crate::eval::{compare, ComparisonReport};
use crate::lstm::{predict, save_checkpoint, train, LstmModel, PredictMode};
use crate::sarima::{auto_fit, fit, fit_summary, forecast, SarimaFit};

pub const LSTM_CHECKPOINT: &str = "lstm_checkpoint.json";
pub const SARIMA_SUMMARY: &str = "sarima_fit.txt";
pub const MANIFEST: &str = "manifest.txt";

/// Extra training rows beyond one seasonal period below which a seasonal
/// fit is flagged.
pub const SEASONAL_MARGIN: usize = 50;

/// Loaded and aligned inputs of a run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub table: AlignedTable,
    pub dataset: AlignedDataset,
    /// Observed primary closes over the test segment.
    pub actual: PriceSeries,
}

pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    let primary = load_csv(&config.primary_csv)?;
    let secondary = load_csv(&config.secondary_csv)?;
    let table = align_calendars(&primary, &secondary)?;
    let dataset = AlignedDataset::from_table(&table, config.split, config.train.lookback)?;
    let actual = PriceSeries::new(
        primary.name().to_string(),
        dataset.test_dates().to_vec(),
        dataset.test_primary().to_vec(),
    )?;
    Ok(Prepared {
        table,
        dataset,
        actual,
    })
}

pub fn train_lstm(config: &RunConfig, dataset: &AlignedDataset) -> Result<LstmModel> {
    let samples = make_windows(dataset)?;
    Ok(train(&config.train, &samples)?.with_scalers(dataset.scalers()))
}

pub fn fit_sarima(config: &RunConfig, dataset: &AlignedDataset) -> Result<SarimaFit> {
    let history = dataset.train_primary();
    match &config.search {
        Some(search) => auto_fit(history, config.sarima, search),
        None => fit(config.sarima, history),
    }
}

/// SARIMA forecast over the whole test segment, issued at the split.
pub fn sarima_forecast(model: &SarimaFit, dataset: &AlignedDataset) -> Result<PriceSeries> {
    let dates = dataset.test_dates().to_vec();
    let values = forecast(model, dates.len())?;
    PriceSeries::forecast("sarima", dates, values)
}

fn lstm_label(mode: PredictMode) -> &'static str {
    match mode {
        PredictMode::OneStep => "lstm",
        PredictMode::Recursive => "lstm_recursive",
    }
}

fn lstm_forecasts(
    config: &RunConfig,
    model: &LstmModel,
    dataset: &AlignedDataset,
) -> Result<Vec<(String, PriceSeries)>> {
    config
        .mode
        .modes()
        .into_iter()
        .map(|mode| Ok((lstm_label(mode).to_string(), predict(model, dataset, mode)?)))
        .collect()
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub report: Option<ComparisonReport>,
    pub warnings: Vec<String>,
}

struct Artifacts {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Artifacts {
    fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }

    fn forecast(&mut self, label: &str, series: &PriceSeries) -> Result<()> {
        let path = self.dir.join(format!("forecast_{label}.csv"));
        write_csv(&path, series, "forecast")?;
        self.files.push(path);
        Ok(())
    }

    fn checkpoint(&mut self, model: &LstmModel) -> Result<()> {
        let path = self.dir.join(LSTM_CHECKPOINT);
        save_checkpoint(model, &path)?;
        self.files.push(path);
        Ok(())
    }
}

fn manifest(
    config: &RunConfig,
    prepared: &Prepared,
    extra: &[(String, String)],
    warnings: &[String],
) -> String {
    let mut lines = vec![format!("tsforge.version={}", env!("CARGO_PKG_VERSION"))];
    lines.extend(config.manifest_lines());
    let d = &prepared.dataset;
    lines.push(format!("data.rows={}", d.len()));
    lines.push(format!("data.train_rows={}", d.split_index()));
    lines.push(format!("data.test_rows={}", d.test_rows().len()));
    lines.push(format!("data.filled_secondary={}", prepared.table.filled));
    if let Some(first) = d.test_dates().first() {
        lines.push(format!("data.first_test_date={first}"));
    }
    for (i, s) in d.scalers().iter().enumerate() {
        lines.push(format!("data.scaler.{i}.min={}", s.min));
        lines.push(format!("data.scaler.{i}.max={}", s.max));
    }
    lines.extend(extra.iter().map(|(k, v)| format!("{k}={v}")));
    lines.extend(warnings.iter().map(|w| format!("warning={w}")));
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn lstm_facts(model: &LstmModel) -> Vec<(String, String)> {
    vec![
        ("lstm.parameters".into(), model.params.len().to_string()),
        ("lstm.updates".into(), model.optimizer.t.to_string()),
        (
            "lstm.final_train_mae".into(),
            model.final_mae().map_or("none".into(), |m| m.to_string()),
        ),
    ]
}

fn sarima_facts(model: &SarimaFit) -> Vec<(String, String)> {
    vec![
        ("sarima.fitted_spec".into(), model.spec.to_string()),
        ("sarima.converged".into(), model.converged.to_string()),
        ("sarima.iterations".into(), model.iterations.to_string()),
        ("sarima.aic".into(), model.aic.to_string()),
    ]
}

fn sarima_warnings(model: &SarimaFit) -> Vec<String> {
    model
        .warnings
        .iter()
        .map(|w| format!("sarima: {w}"))
        .collect()
}

/// Full comparison run. The two engines train concurrently; a SARIMA fit
/// that fails to converge is reported as a warning, not an error.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let prepared = prepare(config)?;
    let dataset = &prepared.dataset;
    let (lstm, sarima) = rayon::join(
        || train_lstm(config, dataset),
        || fit_sarima(config, dataset),
    );
    let (lstm, sarima) = (lstm?, sarima?);

    let mut forecasts = lstm_forecasts(config, &lstm, dataset)?;
    forecasts.push(("sarima".into(), sarima_forecast(&sarima, dataset)?));
    let labelled: Vec<(&str, &PriceSeries)> =
        forecasts.iter().map(|(l, s)| (l.as_str(), s)).collect();
    let report = compare(&labelled, &prepared.actual)?;

    let mut out = Artifacts::create(&config.output_dir)?;
    for (label, series) in &forecasts {
        out.forecast(label, series)?;
    }
    out.files.extend(report.write(&out.dir)?);
    out.text(SARIMA_SUMMARY, &fit_summary(&sarima))?;
    out.checkpoint(&lstm)?;

    let warnings = sarima_warnings(&sarima);
    let mut facts = lstm_facts(&lstm);
    facts.extend(sarima_facts(&sarima));
    out.text(MANIFEST, &manifest(config, &prepared, &facts, &warnings))?;
    Ok(RunSummary {
        output_dir: out.dir,
        files: out.files,
        report: Some(report),
        warnings,
    })
}

/// SARIMA alone: forecast CSV, fit summary and manifest.
pub fn run_sarima(config: &RunConfig) -> Result<RunSummary> {
    let prepared = prepare(config)?;
    let model = fit_sarima(config, &prepared.dataset)?;
    let series = sarima_forecast(&model, &prepared.dataset)?;
    let mut out = Artifacts::create(&config.output_dir)?;
    out.forecast("sarima", &series)?;
    out.text(SARIMA_SUMMARY, &fit_summary(&model))?;
    let warnings = sarima_warnings(&model);
    out.text(
        MANIFEST,
        &manifest(config, &prepared, &sarima_facts(&model), &warnings),
    )?;
    Ok(RunSummary {
        output_dir: out.dir,
        files: out.files,
        report: None,
        warnings,
    })
}

/// LSTM alone: forecast CSVs, checkpoint and manifest.
pub fn run_lstm(config: &RunConfig) -> Result<RunSummary> {
    let prepared = prepare(config)?;
    let model = train_lstm(config, &prepared.dataset)?;
    let mut out = Artifacts::create(&config.output_dir)?;
    for (label, series) in lstm_forecasts(config, &model, &prepared.dataset)? {
        out.forecast(&label, &series)?;
    }
    out.checkpoint(&model)?;
    out.text(
        MANIFEST,
        &manifest(config, &prepared, &lstm_facts(&model), &[]),
    )?;
    Ok(RunSummary {
        output_dir: out.dir,
        files: out.files,
        report: None,
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub severity: Severity,
    pub message: String,
}

impl Issue {
    fn error(message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Checks a config file without training anything. Never fails; every
/// problem found becomes an entry.
pub fn validate(path: impl AsRef<Path>, overrides: &Overrides) -> Vec<Issue> {
    let path = path.as_ref();
    let mut file = match ConfigFile::load(path) {
        Ok(f) => f,
        Err(e) => return vec![Issue::error(e.to_string())],
    };
    file.apply(overrides);
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let (config, errors) = file.resolve(base);
    let mut issues: Vec<Issue> = errors.into_iter().map(Issue::error).collect();
    if let Some(config) = config {
        issues.extend(validate_config(&config));
    }
    issues
}

/// Data-dependent checks of a resolved config.
pub fn validate_config(config: &RunConfig) -> Vec<Issue> {
    let mut issues = Vec::new();
    for path in [&config.primary_csv, &config.secondary_csv] {
        if !path.is_file() {
            issues.push(Issue::error(format!(
                "input file not found: {}",
                path.display()
            )));
        }
    }
    if config.output_dir.exists() && !config.output_dir.is_dir() {
        issues.push(Issue::error(format!(
            "output path is not a directory: {}",
            config.output_dir.display()
        )));
    }
    if !issues.is_empty() {
        return issues;
    }
    let prepared = match prepare(config) {
        Ok(p) => p,
        Err(e) => {
            issues.push(Issue::error(e.to_string()));
            return issues;
        }
    };
    let train_rows = prepared.dataset.split_index();
    if train_rows <= config.train.lookback {
        issues.push(Issue::error(format!(
            "{train_rows} training rows leave no samples for lookback {}",
            config.train.lookback
        )));
    }
    let spec = config.sarima;
    if spec.is_seasonal() && train_rows < spec.period + SEASONAL_MARGIN {
        issues.push(Issue::warning(format!(
            "{train_rows} training rows is short for seasonal period {} (fewer than {})",
            spec.period,
            spec.period + SEASONAL_MARGIN
        )));
    }
    let lost = spec.d + spec.seasonal_d * spec.period;
    let params = spec.arma_params();
    if train_rows <= lost + params {
        issues.push(Issue::error(format!(
            "{train_rows} training rows leave nothing to estimate {params} coefficients after differencing away {lost}"
        )));
    }
    issues
}
