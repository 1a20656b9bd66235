//! Error Regression selection.
//!
//! Each day's best method is recorded by its integer index. The indices of the
//! last `w` days are interpolated by a polynomial of degree `w - 1`, which is
//! evaluated one day ahead. The value is truncated toward zero and clamped
//! into `1..=m` to name tomorrow's method.
//!
//! Within a window the abscissae are re-based to `1..=w`, so the extrapolation
//! point is always `w + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::error_table::DailyErrorTable;
use crate::market_data::PriceSeries;
use crate::metrics::{SelectionTrace, TraceRow};
use crate::predictors::{MethodId, PredictorRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErConfig {
    /// Number of (day, best index) points interpolated.
    pub w: usize,
    /// First decision day. `None` means `w + registry.max_history()`.
    pub warmup: Option<usize>,
}

impl Default for ErConfig {
    fn default() -> Self {
        Self { w: 3, warmup: None }
    }
}

impl ErConfig {
    pub fn warmup(&self, registry: &PredictorRegistry) -> usize {
        self.warmup.unwrap_or(self.w + registry.max_history())
    }

    pub fn validate(&self, registry: &PredictorRegistry) -> Result<()> {
        if self.w < 2 {
            return Err(Error::InvalidConfig(format!(
                "ER window must be >= 2, got {}",
                self.w
            )));
        }
        let min = self.w + registry.max_history();
        if self.warmup(registry) < min {
            return Err(Error::InvalidConfig(format!(
                "ER warmup must be at least w + max window = {min}, got {}",
                self.warmup(registry)
            )));
        }
        Ok(())
    }
}

/// Ordered `(day, best method)` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSeries {
    points: Vec<(usize, MethodId)>,
}

impl IndexSeries {
    /// Checks that days strictly increase and every index lies in `1..=m`.
    pub fn new(points: Vec<(usize, MethodId)>, m: usize) -> Result<Self> {
        for (i, &(day, id)) in points.iter().enumerate() {
            if id.0 == 0 || id.0 > m {
                return Err(Error::UnknownMethod(id));
            }
            if i > 0 && day <= points[i - 1].0 {
                return Err(Error::DuplicateDay(day as f64));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(usize, MethodId)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A polynomial in monomial form, `coeffs[i]` multiplying `x^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// The unique polynomial of degree `n - 1` through `n` points, built by
/// expanding the Lagrange basis into monomial coefficients.
pub fn interpolate(xs: &[f64], ys: &[f64]) -> Result<Polynomial> {
    if xs.len() != ys.len() {
        return Err(Error::Misaligned(format!(
            "{} abscissae for {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    if let Some(&bad) = xs.iter().chain(ys).find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    for (i, &x) in xs.iter().enumerate() {
        if xs[..i].contains(&x) {
            return Err(Error::DuplicateDay(x));
        }
    }

    let mut coeffs = vec![0.0; n];
    let mut basis = Vec::with_capacity(n);
    for j in 0..n {
        // basis = prod_{i != j} (x - xs[i]), ascending powers.
        basis.clear();
        basis.push(1.0);
        let mut denom = 1.0;
        for (i, &xi) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis.push(0.0);
            for p in (1..basis.len()).rev() {
                basis[p] = basis[p - 1] - xi * basis[p];
            }
            basis[0] *= -xi;
            denom *= xs[j] - xi;
        }
        let scale = ys[j] / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += scale * b;
        }
    }
    Ok(Polynomial::new(coeffs))
}

/// Interpolates best-method indices against their days.
pub fn interpolate_index(points: &IndexSeries) -> Result<Polynomial> {
    let xs: Vec<f64> = points.points.iter().map(|&(d, _)| d as f64).collect();
    let ys: Vec<f64> = points.points.iter().map(|&(_, id)| id.0 as f64).collect();
    interpolate(&xs, &ys)
}

/// Integer part (truncation toward zero), clamped into `1..=m`.
pub fn resolve_index(raw: f64, m: usize) -> Result<MethodId> {
    if !raw.is_finite() {
        return Err(Error::NonFinite(raw));
    }
    if m < 2 {
        return Err(Error::InvalidConfig(format!(
            "method count must be >= 2, got {m}"
        )));
    }
    let clamped = raw.trunc().clamp(1.0, m as f64);
    Ok(MethodId(clamped as usize))
}

/// Method with the smallest error on `day`; lowest id on ties.
pub fn best_method_per_day(errors: &DailyErrorTable, day: usize) -> Result<MethodId> {
    errors.best_on(day)
}

/// One ER decision: the interpolated points, the raw extrapolated index and
/// the resolved method.
#[derive(Debug, Clone, PartialEq)]
pub struct ErChoice {
    pub points: IndexSeries,
    pub raw: f64,
    pub method: MethodId,
}

/// Chooses the method for day `t + 1` from the best indices on days `t-w+1..=t`.
pub fn er_choose(errors: &DailyErrorTable, t: usize, w: usize) -> Result<ErChoice> {
    if t < w {
        return Err(Error::WindowUnavailable {
            t,
            k: w,
            len: errors.last_day().unwrap_or(0),
        });
    }
    let m = errors.methods();
    let points = (t + 1 - w..=t)
        .enumerate()
        .map(|(i, day)| best_method_per_day(errors, day).map(|id| (i + 1, id)))
        .collect::<Result<Vec<_>>>()?;
    let points = IndexSeries::new(points, m)?;
    let raw = interpolate_index(&points)?.eval((w + 1) as f64);
    let method = resolve_index(raw, m)?;
    Ok(ErChoice {
        points,
        raw,
        method,
    })
}

/// Runs Error Regression over the whole series. One row per decision day
/// `t = warmup..len-1`, predicting day `t + 1`.
pub fn er_run(
    series: &PriceSeries,
    registry: &PredictorRegistry,
    cfg: &ErConfig,
) -> Result<SelectionTrace> {
    cfg.validate(registry)?;
    let warmup = cfg.warmup(registry);
    if series.len() <= warmup {
        return Err(Error::SeriesTooShort {
            needed: warmup + 1,
            len: series.len(),
        });
    }

    let mut errors = DailyErrorTable::build(series, registry, warmup)?;
    let mut rows = Vec::with_capacity(series.len() - warmup);
    for t in warmup..series.len() {
        if t > warmup {
            errors.record(series, registry, t)?;
        }
        let method = er_choose(&errors, t, cfg.w)?.method;
        let predicted = registry.predict_by_id(method, series, t)?;
        let actual = series.close(t + 1).expect("t + 1 <= len");
        rows.push(TraceRow::new(t + 1, method, predicted, actual));
    }
    Ok(SelectionTrace::new(rows))
}
