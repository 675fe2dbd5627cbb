//! Run configuration: a TOML file with `[data]`, `[lstm]` and `[sarima]`
//! sections, command-line overrides on top, and a record of which values
//! were left at their defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::data::{SplitRule, DEFAULT_LOOKBACK, DEFAULT_TRAIN_FRACTION};
use crate::error::{Error, Result};
use crate::lstm::{AdamConfig, PredictMode, TrainConfig};
use crate::sarima::{OrderSearch, SarimaSpec};

/// Configuration as written in the file. Every field is optional; counts
/// are signed so out-of-range values can be reported rather than failing
/// to parse.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<i64>,
    pub primary_csv: Option<PathBuf>,
    pub secondary_csv: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub lstm: LstmSection,
    #[serde(default)]
    pub sarima: SarimaSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub train_fraction: Option<f64>,
    /// First test date; overrides `train_fraction` when given.
    #[serde(
        default,
        deserialize_with = "date_field",
        skip_serializing_if = "Option::is_none"
    )]
    pub test_start: Option<NaiveDate>,
    pub lookback: Option<i64>,
}

/// Accepts both a bare TOML date and a quoted `YYYY-MM-DD` string.
fn date_field<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<NaiveDate>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Native(toml::value::Datetime),
        Text(String),
    }
    let text = match Raw::deserialize(d)? {
        Raw::Native(dt) => dt.to_string(),
        Raw::Text(s) => s,
    };
    NaiveDate::parse_from_str(&text, "%Y-%m-%d")
        .map(Some)
        .map_err(serde::de::Error::custom)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LstmSection {
    pub epochs: Option<i64>,
    pub batch_size: Option<i64>,
    pub hidden: Option<i64>,
    pub shuffle: Option<bool>,
    pub clip_norm: Option<f64>,
    pub learning_rate: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub epsilon: Option<f64>,
    pub mode: Option<LstmMode>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SarimaSection {
    pub order: Option<[i64; 3]>,
    pub seasonal_order: Option<[i64; 3]>,
    pub period: Option<i64>,
    /// Search `p` and `q` by AIC instead of using `order` as given.
    pub auto: Option<bool>,
    pub max_p: Option<i64>,
    pub max_q: Option<i64>,
}

/// Which LSTM forecasts a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LstmMode {
    #[default]
    OneStep,
    Recursive,
    Both,
}

impl LstmMode {
    pub fn modes(self) -> Vec<PredictMode> {
        match self {
            LstmMode::OneStep => vec![PredictMode::OneStep],
            LstmMode::Recursive => vec![PredictMode::Recursive],
            LstmMode::Both => vec![PredictMode::OneStep, PredictMode::Recursive],
        }
    }
}

impl fmt::Display for LstmMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LstmMode::OneStep => "one-step",
            LstmMode::Recursive => "recursive",
            LstmMode::Both => "both",
        })
    }
}

impl std::str::FromStr for LstmMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-step" => Ok(LstmMode::OneStep),
            "recursive" => Ok(LstmMode::Recursive),
            "both" => Ok(LstmMode::Both),
            other => Err(Error::Config(format!("unknown LSTM mode {other:?}"))),
        }
    }
}

/// Command-line values that win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub epochs: Option<usize>,
    pub mode: Option<LstmMode>,
}

impl ConfigFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.seed = Some(seed as i64);
        }
        if let Some(dir) = &overrides.output_dir {
            self.output_dir = Some(dir.clone());
        }
        if let Some(epochs) = overrides.epochs {
            self.lstm.epochs = Some(epochs as i64);
        }
        if let Some(mode) = overrides.mode {
            self.lstm.mode = Some(mode);
        }
    }

    /// Resolves every value, collecting all problems instead of stopping at
    /// the first. Relative paths are taken relative to `base_dir`.
    pub fn resolve(&self, base_dir: &Path) -> (Option<RunConfig>, Vec<String>) {
        let mut r = Resolver::default();
        let seed = r.count("seed", self.seed, 0) as u64;
        let primary_csv = r.path("primary_csv", &self.primary_csv, base_dir);
        let secondary_csv = r.path("secondary_csv", &self.secondary_csv, base_dir);
        let output_dir = self
            .output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"));
        r.entries.push((
            "output_dir".into(),
            output_dir.display().to_string(),
            self.output_dir.is_none(),
        ));
        let output_dir = if output_dir.is_absolute() {
            output_dir
        } else {
            base_dir.join(output_dir)
        };

        let fraction = r.value(
            "data.train_fraction",
            self.data.train_fraction,
            DEFAULT_TRAIN_FRACTION,
        );
        if !(fraction > 0.0 && fraction < 1.0) {
            r.errors.push(format!(
                "data.train_fraction {fraction} must lie strictly between 0 and 1"
            ));
        }
        let split = match self.data.test_start {
            Some(date) => {
                r.entries
                    .push(("data.test_start".into(), date.to_string(), false));
                SplitRule::TestStart(date)
            }
            None => SplitRule::Fraction(fraction),
        };
        let lookback = r.positive("data.lookback", self.data.lookback, DEFAULT_LOOKBACK);

        let defaults = TrainConfig::default();
        let l = &self.lstm;
        let epochs = r.positive("lstm.epochs", l.epochs, defaults.epochs);
        let batch_size = r.positive("lstm.batch_size", l.batch_size, defaults.batch_size);
        let hidden = r.positive("lstm.hidden", l.hidden, defaults.hidden);
        let shuffle = r.value("lstm.shuffle", l.shuffle, defaults.shuffle);
        let clip_norm = match l.clip_norm {
            Some(c) => {
                r.entries
                    .push(("lstm.clip_norm".into(), c.to_string(), false));
                if !(c > 0.0) {
                    r.errors
                        .push(format!("lstm.clip_norm {c} must be positive"));
                }
                Some(c)
            }
            None => {
                r.entries
                    .push(("lstm.clip_norm".into(), "none".into(), true));
                None
            }
        };
        let a = AdamConfig::default();
        let adam = AdamConfig {
            learning_rate: r.value("lstm.learning_rate", l.learning_rate, a.learning_rate),
            beta1: r.value("lstm.beta1", l.beta1, a.beta1),
            beta2: r.value("lstm.beta2", l.beta2, a.beta2),
            epsilon: r.value("lstm.epsilon", l.epsilon, a.epsilon),
        };
        let mode = r.value("lstm.mode", l.mode, LstmMode::default());
        let train = TrainConfig {
            epochs,
            batch_size,
            seed,
            hidden,
            lookback,
            shuffle,
            clip_norm,
            adam,
        };
        if let Err(e) = train.validate() {
            r.errors.push(e.to_string());
        }

        let s = &self.sarima;
        let base = SarimaSpec::default_seasonal();
        let order = r.triple("sarima.order", s.order, [base.p, base.d, base.q]);
        let seasonal = r.triple(
            "sarima.seasonal_order",
            s.seasonal_order,
            [base.seasonal_p, base.seasonal_d, base.seasonal_q],
        );
        let period = r.positive("sarima.period", s.period, base.period);
        let auto = r.value("sarima.auto", s.auto, false);
        let max_p = r.count("sarima.max_p", s.max_p, 3);
        let max_q = r.count("sarima.max_q", s.max_q, 3);
        let spec = SarimaSpec {
            p: order[0],
            d: order[1],
            q: order[2],
            seasonal_p: seasonal[0],
            seasonal_d: seasonal[1],
            seasonal_q: seasonal[2],
            period,
        };
        if let Err(e) = spec.validate() {
            r.errors.push(e.to_string());
        }
        let search = auto.then(|| OrderSearch::up_to(max_p, max_q));

        if !r.errors.is_empty() {
            return (None, r.errors);
        }
        let config = RunConfig {
            seed,
            primary_csv: primary_csv.unwrap_or_default(),
            secondary_csv: secondary_csv.unwrap_or_default(),
            output_dir,
            split,
            train,
            mode,
            sarima: spec,
            search,
            entries: r.entries,
        };
        (Some(config), Vec::new())
    }
}

#[derive(Default)]
struct Resolver {
    entries: Vec<(String, String, bool)>,
    errors: Vec<String>,
}

impl Resolver {
    fn value<T: fmt::Display>(&mut self, key: &str, given: Option<T>, default: T) -> T {
        let defaulted = given.is_none();
        let v = given.unwrap_or(default);
        self.entries
            .push((key.to_string(), v.to_string(), defaulted));
        v
    }

    fn count(&mut self, key: &str, given: Option<i64>, default: usize) -> usize {
        match given {
            Some(v) if v < 0 => {
                self.errors
                    .push(format!("{key} must not be negative (got {v})"));
                0
            }
            other => self.value(key, other.map(|v| v as usize), default),
        }
    }

    fn positive(&mut self, key: &str, given: Option<i64>, default: usize) -> usize {
        match given {
            Some(v) if v < 1 => {
                self.errors
                    .push(format!("{key} must be at least 1 (got {v})"));
                0
            }
            other => self.value(key, other.map(|v| v as usize), default),
        }
    }

    fn triple(&mut self, key: &str, given: Option<[i64; 3]>, default: [usize; 3]) -> [usize; 3] {
        match given {
            Some(t) if t.iter().any(|&v| v < 0) => {
                self.errors
                    .push(format!("{key} orders must not be negative (got {t:?})"));
                [0; 3]
            }
            Some(t) => {
                let v = t.map(|x| x as usize);
                self.entries.push((
                    key.to_string(),
                    format!("{},{},{}", v[0], v[1], v[2]),
                    false,
                ));
                v
            }
            None => {
                let v = default;
                self.entries
                    .push((key.to_string(), format!("{},{},{}", v[0], v[1], v[2]), true));
                v
            }
        }
    }

    fn path(&mut self, key: &str, given: &Option<PathBuf>, base: &Path) -> Option<PathBuf> {
        match given {
            Some(p) => {
                let p = if p.is_absolute() {
                    p.clone()
                } else {
                    base.join(p)
                };
                self.entries
                    .push((key.to_string(), p.display().to_string(), false));
                Some(p)
            }
            None => {
                self.errors.push(format!("{key} is required"));
                None
            }
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub primary_csv: PathBuf,
    pub secondary_csv: PathBuf,
    pub output_dir: PathBuf,
    pub split: SplitRule,
    pub train: TrainConfig,
    pub mode: LstmMode,
    pub sarima: SarimaSpec,
    /// Order search bounds when automatic selection is on.
    pub search: Option<OrderSearch>,
    /// `(key, value, defaulted)` for every parameter, in file order.
    entries: Vec<(String, String, bool)>,
}

impl RunConfig {
    /// Loads, overrides and resolves a config file.
    pub fn from_file(path: impl AsRef<Path>, overrides: &Overrides) -> Result<Self> {
        let path = path.as_ref();
        let mut file = ConfigFile::load(path)?;
        file.apply(overrides);
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        match file.resolve(base) {
            (Some(c), _) => Ok(c),
            (None, errors) => Err(Error::Config(errors.join("; "))),
        }
    }

    /// `key=value` lines; defaulted values carry a `default:` prefix.
    pub fn manifest_lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(k, v, defaulted)| {
                if *defaulted {
                    format!("{k}=default:{v}")
                } else {
                    format!("{k}={v}")
                }
            })
            .collect()
    }
}
