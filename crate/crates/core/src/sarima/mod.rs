//! SARIMA(p, d, q)×(P, D, Q)_s by differencing and conditional sum of
//! squares, with residual diagnostics.

mod css;
mod diagnostics;
mod diff;
mod fit;
mod simplex;
mod spec;
pub mod special;

pub use css::{css_residuals, expand_ar, expand_ma, is_stationary};
pub use diagnostics::{
    acf, fit_summary, ljung_box, ljung_box_from_acf, standardized_residuals, LjungBox,
    SUMMARY_LJUNG_BOX_LAGS,
};
pub use diff::{difference, undifference};
pub use fit::{auto_fit, fit, fit_with, forecast, FitWarning, OrderSearch, SarimaFit};
pub use simplex::{minimize, SimplexOptions, SimplexResult};
pub use spec::SarimaSpec;
