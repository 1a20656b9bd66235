//! Per-day absolute errors of every registered predictor.

use crate::error::{Error, Result};
use crate::market_data::PriceSeries;
use crate::predictors::{MethodId, PredictorRegistry};

/// `|prediction(day) - close(day)|` for each method, over a contiguous run of
/// days. The prediction for `day` is made from closes up to `day - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyErrorTable {
    methods: usize,
    first_day: usize,
    rows: Vec<Vec<f64>>,
}

impl DailyErrorTable {
    /// Empty table whose first row will be `first_day`.
    pub fn new(methods: usize, first_day: usize) -> Self {
        Self {
            methods,
            first_day,
            rows: Vec::new(),
        }
    }

    /// Table from explicit rows, `rows[i][j]` being method `j+1` on day `first_day + i`.
    pub fn from_rows(first_day: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let methods = rows.first().map_or(0, Vec::len);
        let mut table = Self::new(methods, first_day);
        for (i, row) in rows.into_iter().enumerate() {
            table.push(first_day + i, row)?;
        }
        Ok(table)
    }

    /// The first day on which every predictor in `registry` has an error.
    pub fn first_available_day(registry: &PredictorRegistry) -> usize {
        registry.max_history() + 1
    }

    /// Fills every day from the first available one through `through`.
    pub fn build(
        series: &PriceSeries,
        registry: &PredictorRegistry,
        through: usize,
    ) -> Result<Self> {
        let first = Self::first_available_day(registry);
        let mut table = Self::new(registry.len(), first);
        for day in first..=through {
            table.record(series, registry, day)?;
        }
        Ok(table)
    }

    /// Appends the errors for `day`; `day` must follow the last recorded day.
    pub fn record(
        &mut self,
        series: &PriceSeries,
        registry: &PredictorRegistry,
        day: usize,
    ) -> Result<()> {
        let actual = series.close(day).ok_or(Error::WindowUnavailable {
            t: day,
            k: 1,
            len: series.len(),
        })?;
        let errors = registry
            .predict_all(series, day - 1)?
            .into_iter()
            .map(|p| (p - actual).abs())
            .collect();
        self.push(day, errors)
    }

    pub fn push(&mut self, day: usize, errors: Vec<f64>) -> Result<()> {
        let expected = self.first_day + self.rows.len();
        if day != expected {
            return Err(Error::Misaligned(format!(
                "error row for day {day} pushed where day {expected} was expected"
            )));
        }
        if errors.len() != self.methods {
            return Err(Error::Misaligned(format!(
                "day {day} has {} errors for {} methods",
                errors.len(),
                self.methods
            )));
        }
        if let Some(&bad) = errors.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::NonFinite(bad));
        }
        self.rows.push(errors);
        Ok(())
    }

    pub fn methods(&self) -> usize {
        self.methods
    }

    pub fn first_day(&self) -> usize {
        self.first_day
    }

    /// Last recorded day, if any.
    pub fn last_day(&self) -> Option<usize> {
        (!self.rows.is_empty()).then(|| self.first_day + self.rows.len() - 1)
    }

    /// All method errors on `day`, in id order.
    pub fn day(&self, day: usize) -> Result<&[f64]> {
        day.checked_sub(self.first_day)
            .and_then(|i| self.rows.get(i))
            .map(Vec::as_slice)
            .ok_or(Error::MissingCell {
                day,
                method: MethodId(1),
            })
    }

    pub fn get(&self, day: usize, method: MethodId) -> Result<f64> {
        let missing = Error::MissingCell { day, method };
        let row = self
            .day(day)
            .map_err(|_| Error::MissingCell { day, method })?;
        method
            .0
            .checked_sub(1)
            .and_then(|j| row.get(j))
            .copied()
            .ok_or(missing)
    }

    /// Method with the smallest error on `day`; the lowest id wins ties.
    pub fn best_on(&self, day: usize) -> Result<MethodId> {
        let row = self.day(day)?;
        let mut best = 0;
        for (j, &e) in row.iter().enumerate().skip(1) {
            if e < row[best] {
                best = j;
            }
        }
        Ok(MethodId(best + 1))
    }
}
