use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders of a SARIMA(p, d, q)×(P, D, Q)_s model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SarimaSpec {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub seasonal_p: usize,
    pub seasonal_d: usize,
    pub seasonal_q: usize,
    /// Observations per season.
    pub period: usize,
}

impl SarimaSpec {
    pub fn new(
        order: (usize, usize, usize),
        seasonal: (usize, usize, usize),
        period: usize,
    ) -> Result<Self> {
        let spec = Self {
            p: order.0,
            d: order.1,
            q: order.2,
            seasonal_p: seasonal.0,
            seasonal_d: seasonal.1,
            seasonal_q: seasonal.2,
            period,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Non-seasonal ARIMA(p, d, q).
    pub fn arima(p: usize, d: usize, q: usize) -> Self {
        Self {
            p,
            d,
            q,
            seasonal_p: 0,
            seasonal_d: 0,
            seasonal_q: 0,
            period: 1,
        }
    }

    /// SARIMA(2,0,2)×(0,1,0) with a 250 trading-day season.
    pub fn default_seasonal() -> Self {
        Self {
            p: 2,
            d: 0,
            q: 2,
            seasonal_p: 0,
            seasonal_d: 1,
            seasonal_q: 0,
            period: 250,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::Config("seasonal period must be at least 1".into()));
        }
        if self.is_seasonal() && self.period < 2 {
            return Err(Error::Config(
                "seasonal terms need a period of at least 2".into(),
            ));
        }
        Ok(())
    }

    pub fn is_seasonal(&self) -> bool {
        self.seasonal_p + self.seasonal_d + self.seasonal_q > 0
    }

    /// Observations lost to differencing, `d + D·s`.
    pub fn differencing_lag(&self) -> usize {
        self.d + self.seasonal_d * self.period
    }

    /// ARMA coefficients estimated, excluding the intercept.
    pub fn arma_params(&self) -> usize {
        self.p + self.q + self.seasonal_p + self.seasonal_q
    }

    /// Everything estimated, including the intercept.
    pub fn estimated_params(&self) -> usize {
        self.arma_params() + 1
    }

    /// Highest lag of the expanded AR polynomial.
    pub fn ar_degree(&self) -> usize {
        self.p + self.seasonal_p * self.period
    }

    pub fn ma_degree(&self) -> usize {
        self.q + self.seasonal_q * self.period
    }
}

impl Default for SarimaSpec {
    fn default() -> Self {
        Self::default_seasonal()
    }
}

impl fmt::Display for SarimaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})x({},{},{})[{}]",
            self.p, self.d, self.q, self.seasonal_p, self.seasonal_d, self.seasonal_q, self.period
        )
    }
}
