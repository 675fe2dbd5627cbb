//! CSV ingestion, calendar alignment, min-max scaling and supervised
//! windowing of daily closes.

mod dataset;
mod scaler;
mod series;

pub use dataset::{
    make_windows, split, split_point, AlignedDataset, Sample, SplitRule, DEFAULT_LOOKBACK,
    DEFAULT_TRAIN_FRACTION,
};
pub use scaler::ScalerParams;
pub use series::{align_calendars, load_csv, write_csv, AlignedTable, PriceSeries};
