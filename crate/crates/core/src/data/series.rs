use std::fs::File;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use serde::Deserialize;

use crate::error::{Error, Result};

/// A dated sequence of closes for one index.
///
/// Dates strictly increase. Observed series (from [`PriceSeries::new`] or
/// [`load_csv`]) also have strictly positive closes; forecast series built
/// with [`PriceSeries::forecast`] only need finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    name: String,
    dates: Vec<NaiveDate>,
    closes: Vec<f64>,
}

impl PriceSeries {
    pub fn new(name: impl Into<String>, dates: Vec<NaiveDate>, closes: Vec<f64>) -> Result<Self> {
        check_lengths(&dates, &closes)?;
        check_dates(&dates)?;
        for (&date, &value) in dates.iter().zip(&closes) {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveClose { date, value });
            }
        }
        Ok(Self {
            name: name.into(),
            dates,
            closes,
        })
    }

    /// Builds a series of model outputs. Values may be any finite number.
    pub fn forecast(
        name: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_lengths(&dates, &values)?;
        check_dates(&dates)?;
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite forecast value {bad}")));
        }
        Ok(Self {
            name: name.into(),
            dates,
            closes: values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, f64)> + '_ {
        self.dates.iter().copied().zip(self.closes.iter().copied())
    }
}

fn check_lengths(dates: &[NaiveDate], values: &[f64]) -> Result<()> {
    if dates.len() != values.len() {
        return Err(Error::Shape(format!(
            "{} dates but {} values",
            dates.len(),
            values.len()
        )));
    }
    Ok(())
}

fn check_dates(dates: &[NaiveDate]) -> Result<()> {
    for pair in dates.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateDate(pair[0]));
        }
        if pair[1] < pair[0] {
            return Err(Error::Unordered {
                earlier: pair[0],
                later: pair[1],
            });
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct Row {
    date: String,
    close: String,
}

/// Reads a `date,close` CSV with ISO dates. Rows may appear in any order;
/// the result is sorted by date.
pub fn load_csv(path: impl AsRef<Path>) -> Result<PriceSeries> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for record in reader.deserialize::<Row>() {
        let row = record.map_err(|e| csv_error(path, e))?;
        // header is line 1
        let line = rows.len() as u64 + 2;
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let date = NaiveDate::parse_from_str(&row.date, "%Y-%m-%d")
            .map_err(|e| parse_err(format!("bad date {:?}: {e}", row.date)))?;
        let close: f64 = row
            .close
            .parse()
            .map_err(|e| parse_err(format!("bad close {:?}: {e}", row.close)))?;
        if !(close > 0.0) || !close.is_finite() {
            return Err(Error::NonPositiveClose { date, value: close });
        }
        rows.push((date, close));
    }
    rows.sort_by_key(|&(d, _)| d);

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let (dates, closes) = rows.into_iter().unzip();
    PriceSeries::new(name, dates, closes)
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Writes `date,<value_header>` rows.
pub fn write_csv(path: impl AsRef<Path>, series: &PriceSeries, value_header: &str) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::with_capacity(series.len() * 24);
    out.push_str("date,");
    out.push_str(value_header);
    out.push('\n');
    for (date, value) in series.iter() {
        out.push_str(&format!("{date},{value}\n"));
    }
    File::create(path)
        .and_then(|mut f| f.write_all(out.as_bytes()))
        .map_err(io_err)
}

/// Two series on the primary calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedTable {
    pub dates: Vec<NaiveDate>,
    pub primary: Vec<f64>,
    pub secondary: Vec<f64>,
    /// Number of primary dates whose secondary value was carried forward.
    pub filled: usize,
}

/// Puts the secondary series onto the primary's trading calendar. A primary
/// date the secondary market did not trade on takes the secondary's most
/// recent earlier close.
pub fn align_calendars(primary: &PriceSeries, secondary: &PriceSeries) -> Result<AlignedTable> {
    let Some(&first) = primary.dates().first() else {
        return Err(Error::Empty("primary series"));
    };
    let sec_dates = secondary.dates();
    let sec_closes = secondary.closes();
    if sec_dates.first().is_none_or(|&d| d > first) {
        return Err(Error::NoPrecedingObservation(first));
    }

    let mut out = Vec::with_capacity(primary.len());
    let mut filled = 0;
    let mut cursor = 0;
    for &date in primary.dates() {
        while cursor + 1 < sec_dates.len() && sec_dates[cursor + 1] <= date {
            cursor += 1;
        }
        if sec_dates[cursor] != date {
            filled += 1;
        }
        out.push(sec_closes[cursor]);
    }

    Ok(AlignedTable {
        dates: primary.dates().to_vec(),
        primary: primary.closes().to_vec(),
        secondary: out,
        filled,
    })
}
