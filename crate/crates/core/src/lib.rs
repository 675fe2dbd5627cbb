//! Daily index forecasting with two engines side by side: a from-scratch
//! LSTM trained with backpropagation through time and Adam, and a SARIMA
//! model fitted by conditional sum of squares. Both are scored on the same
//! held-out period with directional accuracy, RMSE, overall return and
//! equivalent average daily return.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod lstm;
pub mod pipeline;
pub mod sarima;
pub mod synth;

pub use error::{Error, Result};
