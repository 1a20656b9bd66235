//! Selection traces and the error metrics computed from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predictors::MethodId;

/// One evaluated day: the method used to predict `day`, its prediction and the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// The predicted day. The prediction was made from closes up to `day - 1`.
    pub day: usize,
    pub method_id: MethodId,
    pub predicted: f64,
    pub actual: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl TraceRow {
    pub fn new(day: usize, method_id: MethodId, predicted: f64, actual: f64) -> Self {
        let abs_err = (predicted - actual).abs();
        Self {
            day,
            method_id,
            predicted,
            actual,
            abs_err,
            rel_err: abs_err / actual,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub rows: Vec<TraceRow>,
}

impl SelectionTrace {
    pub fn new(rows: Vec<TraceRow>) -> Self {
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first_day(&self) -> Option<usize> {
        self.rows.first().map(|r| r.day)
    }

    pub fn methods(&self) -> impl Iterator<Item = MethodId> + '_ {
        self.rows.iter().map(|r| r.method_id)
    }

    pub fn predictions(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.predicted).collect()
    }

    /// Rows whose predicted day is at least `day`.
    pub fn from_day(&self, day: usize) -> Self {
        Self::new(self.rows.iter().filter(|r| r.day >= day).copied().collect())
    }

    /// Number of days on which the method differs from the previous day's.
    pub fn switches(&self) -> usize {
        self.rows
            .windows(2)
            .filter(|w| w[0].method_id != w[1].method_id)
            .count()
    }
}

fn mean_of(trace: &SelectionTrace, f: impl Fn(&TraceRow) -> f64) -> Result<f64> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(trace.rows.iter().map(f).sum::<f64>() / trace.len() as f64)
}

pub fn mean_abs_error(trace: &SelectionTrace) -> Result<f64> {
    mean_of(trace, |r| r.abs_err)
}

pub fn mean_rel_error(trace: &SelectionTrace) -> Result<f64> {
    mean_of(trace, |r| r.rel_err)
}

pub fn rmse(trace: &SelectionTrace) -> Result<f64> {
    mean_of(trace, |r| r.abs_err * r.abs_err).map(f64::sqrt)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub mean_abs_error: f64,
    pub mean_rel_error: f64,
    pub rmse: f64,
}

impl ErrorSummary {
    pub fn of(trace: &SelectionTrace) -> Result<Self> {
        Ok(Self {
            mean_abs_error: mean_abs_error(trace)?,
            mean_rel_error: mean_rel_error(trace)?,
            rmse: rmse(trace)?,
        })
    }
}
