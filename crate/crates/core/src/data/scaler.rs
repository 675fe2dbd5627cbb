use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Affine map sending the fitted minimum to 0 and maximum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub min: f64,
    pub max: f64,
}

impl ScalerParams {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::ConstantColumn);
        }
        Ok(Self { min, max })
    }

    pub fn fit(column: &[f64]) -> Result<Self> {
        let (min, max) = column
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        Self::new(min, max)
    }

    pub fn range(&self) -> f64 {
        self.max - self.min
    }

    /// Values outside the fitted range map outside `[0, 1]`.
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.min) / self.range()
    }

    pub fn invert(&self, scaled: f64) -> f64 {
        self.min + scaled * self.range()
    }

    pub fn apply_all(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.apply(x)).collect()
    }

    pub fn invert_all(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.invert(x)).collect()
    }
}
