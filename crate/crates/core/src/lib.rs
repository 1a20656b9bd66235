//! Meta-selection over simple one-step-ahead stock price predictors.
//!
//! Base predictors (moving average, windowed least-squares line, persistence)
//! each forecast tomorrow's close. Two selectors decide which one to trust:
//!
//! - [`ea`] (Error Analysis) keeps the method that most often had the smallest
//!   daily error recently, re-checking every few days and confirming a drop
//!   over a shorter window before handing over to the runner-up.
//! - [`er`] (Error Regression) interpolates the indices of the last few daily
//!   winners with a polynomial and extrapolates one day ahead.
//!
//! [`metrics`] and [`backtest`] score the resulting traces; [`report`] and
//! [`cli`] wrap everything into JSON/CSV reports.

pub mod backtest;
pub mod cli;
pub mod ea;
pub mod er;
pub mod error;
pub mod error_table;
pub mod market_data;
pub mod metrics;
pub mod predictors;
pub mod report;
pub mod strategy;

pub use error::{Error, Result};
pub use market_data::{PriceSeries, SynthKind, SynthSpec};
pub use metrics::{SelectionTrace, TraceRow};
pub use predictors::{MethodId, PredictorRegistry};
pub use strategy::{Settings, Strategy};
