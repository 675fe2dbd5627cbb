use std::ops::Range;

use chrono::NaiveDate;

use super::scaler::ScalerParams;
use super::series::AlignedTable;
use crate::error::{Error, Result};

pub const DEFAULT_LOOKBACK: usize = 5;

/// Training share that puts 412 of 501 rows in the training segment.
pub const DEFAULT_TRAIN_FRACTION: f64 = 412.0 / 501.0;

/// Where the training segment ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitRule {
    /// Share of rows, rounded to the nearest count.
    Fraction(f64),
    /// First date of the test segment. Must be on or inside the calendar.
    TestStart(NaiveDate),
}

impl Default for SplitRule {
    fn default() -> Self {
        SplitRule::Fraction(DEFAULT_TRAIN_FRACTION)
    }
}

/// Number of training rows for a calendar under `rule`. Both segments must
/// be nonempty.
pub fn split_point(dates: &[NaiveDate], rule: SplitRule) -> Result<usize> {
    let n = dates.len();
    let at = match rule {
        SplitRule::Fraction(f) => {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidSplit(format!("fraction {f} outside (0, 1)")));
            }
            (f * n as f64).round() as usize
        }
        SplitRule::TestStart(date) => {
            if dates.first().is_none_or(|&d| date < d) || dates.last().is_none_or(|&d| date > d) {
                return Err(Error::InvalidSplit(format!("{date} outside the calendar")));
            }
            dates.partition_point(|&d| d < date)
        }
    };
    if at == 0 || at >= n {
        return Err(Error::InvalidSplit(format!(
            "{at} training rows of {n} leaves an empty segment"
        )));
    }
    Ok(at)
}

/// Contiguous, disjoint row ranges for the training and test segments.
pub fn split(dataset: &AlignedDataset, rule: SplitRule) -> Result<(Range<usize>, Range<usize>)> {
    let at = split_point(&dataset.dates, rule)?;
    Ok((0..at, at..dataset.len()))
}

/// Feature table on the primary calendar, each column min-max scaled with
/// parameters fitted on the training rows only. Column 0 is the primary
/// close, the forecasting target.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedDataset {
    pub dates: Vec<NaiveDate>,
    raw: Vec<Vec<f64>>,
    scaled: Vec<Vec<f64>>,
    scalers: Vec<ScalerParams>,
    split_index: usize,
    lookback: usize,
}

impl AlignedDataset {
    pub fn from_table(table: &AlignedTable, rule: SplitRule, lookback: usize) -> Result<Self> {
        let split_index = split_point(&table.dates, rule)?;
        Self::from_columns(
            table.dates.clone(),
            vec![table.primary.clone(), table.secondary.clone()],
            split_index,
            lookback,
        )
    }

    /// Builds a dataset from raw feature columns, fitting one scaler per
    /// column on rows `..split_index`.
    pub fn from_columns(
        dates: Vec<NaiveDate>,
        columns: Vec<Vec<f64>>,
        split_index: usize,
        lookback: usize,
    ) -> Result<Self> {
        let n = dates.len();
        if columns.is_empty() {
            return Err(Error::Empty("feature columns"));
        }
        if let Some(col) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::Shape(format!(
                "{n} dates but column of {}",
                col.len()
            )));
        }
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InsufficientData(
                "missing or non-finite feature value".into(),
            ));
        }
        if split_index == 0 || split_index >= n {
            return Err(Error::InvalidSplit(format!(
                "split at {split_index} of {n} rows"
            )));
        }
        if lookback == 0 {
            return Err(Error::Config("lookback must be at least 1".into()));
        }
        let scalers = columns
            .iter()
            .map(|c| ScalerParams::fit(&c[..split_index]))
            .collect::<Result<Vec<_>>>()?;
        let scaled = columns
            .iter()
            .zip(&scalers)
            .map(|(c, s)| s.apply_all(c))
            .collect();
        Ok(Self {
            dates,
            raw: columns,
            scaled,
            scalers,
            split_index,
            lookback,
        })
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.raw.len()
    }

    pub fn split_index(&self) -> usize {
        self.split_index
    }

    pub fn lookback(&self) -> usize {
        self.lookback
    }

    pub fn scalers(&self) -> &[ScalerParams] {
        &self.scalers
    }

    pub fn primary_scaler(&self) -> ScalerParams {
        self.scalers[0]
    }

    pub fn raw_column(&self, feature: usize) -> &[f64] {
        &self.raw[feature]
    }

    pub fn scaled_column(&self, feature: usize) -> &[f64] {
        &self.scaled[feature]
    }

    pub fn scaled_row(&self, row: usize) -> impl Iterator<Item = f64> + '_ {
        self.scaled.iter().map(move |c| c[row])
    }

    pub fn train_rows(&self) -> Range<usize> {
        0..self.split_index
    }

    pub fn test_rows(&self) -> Range<usize> {
        self.split_index..self.len()
    }

    pub fn test_dates(&self) -> &[NaiveDate] {
        &self.dates[self.split_index..]
    }

    /// Raw primary closes over the training segment.
    pub fn train_primary(&self) -> &[f64] {
        &self.raw[0][..self.split_index]
    }

    /// Raw primary closes over the test segment.
    pub fn test_primary(&self) -> &[f64] {
        &self.raw[0][self.split_index..]
    }

    /// Scaled input window covering rows `end - lookback .. end`, row-major.
    pub fn window_ending_before(&self, end: usize) -> Result<Vec<f64>> {
        if end < self.lookback || end > self.len() {
            return Err(Error::InsufficientData(format!(
                "window of {} rows cannot end before row {end}",
                self.lookback
            )));
        }
        let mut out = Vec::with_capacity(self.lookback * self.n_features());
        for row in end - self.lookback..end {
            out.extend(self.scaled_row(row));
        }
        Ok(out)
    }
}

/// One supervised example: `lookback` consecutive scaled feature rows and
/// the scaled primary close of the following row.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Row-major `steps × features`.
    pub input: Vec<f64>,
    pub features: usize,
    pub target: f64,
    /// Dataset row the target comes from.
    pub target_row: usize,
}

impl Sample {
    pub fn steps(&self) -> usize {
        self.input.len() / self.features
    }

    pub fn row(&self, step: usize) -> &[f64] {
        &self.input[step * self.features..(step + 1) * self.features]
    }
}

/// Training samples. A training segment of `N` rows yields `N - L` samples,
/// none of which touches a test row.
pub fn make_windows(dataset: &AlignedDataset) -> Result<Vec<Sample>> {
    let n = dataset.split_index();
    let lookback = dataset.lookback();
    if n <= lookback {
        return Err(Error::InsufficientData(format!(
            "training segment of {n} rows needs more than {lookback} rows"
        )));
    }
    let primary = dataset.scaled_column(0);
    (lookback..n)
        .map(|target_row| {
            Ok(Sample {
                input: dataset.window_ending_before(target_row)?,
                features: dataset.n_features(),
                target: primary[target_row],
                target_row,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Duration;

    fn dates(n: usize) -> Vec<NaiveDate> {
        let start = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
        (0..n).map(|i| start + Duration::days(i as i64)).collect()
    }

    fn dataset(n: usize, split: usize, lookback: usize) -> AlignedDataset {
        let a: Vec<f64> = (0..n).map(|i| 100.0 + i as f64).collect();
        let b: Vec<f64> = (0..n).map(|i| 50.0 + (i as f64).sin()).collect();
        AlignedDataset::from_columns(dates(n), vec![a, b], split, lookback).unwrap()
    }

    #[test]
    fn default_split_reproduces_412_of_501() {
        assert_eq!(split_point(&dates(501), SplitRule::default()).unwrap(), 412);
    }

    #[test]
    fn eighty_percent_of_ten() {
        assert_eq!(
            split_point(&dates(10), SplitRule::Fraction(0.8)).unwrap(),
            8
        );
        let ds = dataset(10, 8, 1);
        assert_eq!(split(&ds, SplitRule::Fraction(0.8)).unwrap(), (0..8, 8..10));
    }

    #[test]
    fn full_fraction_is_rejected() {
        assert!(split_point(&dates(10), SplitRule::Fraction(1.0)).is_err());
        assert!(split_point(&dates(10), SplitRule::Fraction(0.0)).is_err());
        assert!(split_point(&dates(10), SplitRule::Fraction(0.01)).is_err());
    }

    #[test]
    fn split_by_date() {
        let d = dates(10);
        assert_eq!(split_point(&d, SplitRule::TestStart(d[7])).unwrap(), 7);
        assert!(split_point(&d, SplitRule::TestStart(d[0])).is_err());
        assert!(split_point(&d, SplitRule::TestStart(d[9] + Duration::days(1))).is_err());
    }

    #[test]
    fn window_count_is_rows_minus_lookback() {
        let ds = dataset(501, 412, 5);
        assert_eq!(make_windows(&ds).unwrap().len(), 407);
    }

    #[test]
    fn lookback_one_pairs_consecutive_rows() {
        let ds = dataset(5, 3, 1);
        let samples = make_windows(&ds).unwrap();
        assert_eq!(samples.len(), 2);
        let p = ds.scaled_column(0);
        let q = ds.scaled_column(1);
        assert_eq!(samples[0].input, vec![p[0], q[0]]);
        assert_eq!(samples[0].target, p[1]);
        assert_eq!(samples[1].input, vec![p[1], q[1]]);
        assert_eq!(samples[1].target, p[2]);
    }

    #[test]
    fn short_training_segment_is_rejected() {
        let ds = dataset(6, 4, 5);
        assert!(matches!(make_windows(&ds), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn windows_never_reach_test_rows() {
        let ds = dataset(60, 45, 7);
        for s in make_windows(&ds).unwrap() {
            assert!(s.target_row < ds.split_index());
            assert_eq!(s.steps(), 7);
        }
    }

    #[test]
    fn training_values_scaled_into_unit_interval() {
        let ds = dataset(100, 80, 5);
        for f in 0..ds.n_features() {
            let col = &ds.scaled_column(f)[ds.train_rows()];
            assert!(col.iter().all(|v| (0.0..=1.0).contains(v)));
        }
        // trending primary exceeds 1 after the split
        assert!(ds.scaled_column(0)[ds.test_rows()].iter().all(|&v| v > 1.0));
    }
}
