//! One-step-ahead base predictors and the registry that numbers them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::PriceSeries;

/// Default window for moving average and linear regression.
pub const DEFAULT_WINDOW: usize = 5;

/// 1-based position of a predictor in a [`PredictorRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MethodId(pub usize);

impl MethodId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A rule that estimates `close(t + 1)` from the closes up to day `t`.
pub trait Predictor: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;

    /// Number of trailing closes the predictor reads; `predict` needs `t >= history()`.
    fn history(&self) -> usize;

    /// The configured window length, if the predictor has one.
    fn window(&self) -> Option<usize> {
        None
    }

    fn predict(&self, series: &PriceSeries, t: usize) -> Result<f64>;
}

/// Mean of the closes on days `t-k+1..=t`.
pub fn predict_ma(series: &PriceSeries, t: usize, k: usize) -> Result<f64> {
    series.window(t, k).map(window_mean)
}

/// Mean taken as offsets from the first element, so a constant window
/// averages to exactly that constant.
fn window_mean(w: &[f64]) -> f64 {
    let anchor = w[0];
    anchor + w.iter().map(|&x| x - anchor).sum::<f64>() / w.len() as f64
}

/// Least-squares line `a*d + b` through days `t-k+1..=t`, evaluated at `d = t+1`.
pub fn predict_lr(series: &PriceSeries, t: usize, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!(
            "linear regression needs a window of at least 2, got {k}"
        )));
    }
    let w = series.window(t, k)?;
    // Regress on local offsets 0..k; the fitted line is the same under the shift.
    let n = k as f64;
    let x_mean = (n - 1.0) / 2.0;
    let y_mean = window_mean(w);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in w.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (y - y_mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    // Day t+1 sits at local offset k.
    Ok(y_mean + slope * (n - x_mean))
}

/// Persistence: tomorrow equals today.
pub fn predict_naive(series: &PriceSeries, t: usize) -> Result<f64> {
    series.window(t, 1).map(|w| w[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MovingAverage {
    pub window: usize,
}

impl Predictor for MovingAverage {
    fn name(&self) -> &str {
        "ma"
    }
    fn history(&self) -> usize {
        self.window
    }
    fn window(&self) -> Option<usize> {
        Some(self.window)
    }
    fn predict(&self, series: &PriceSeries, t: usize) -> Result<f64> {
        predict_ma(series, t, self.window)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearRegression {
    pub window: usize,
}

impl Predictor for LinearRegression {
    fn name(&self) -> &str {
        "lr"
    }
    fn history(&self) -> usize {
        self.window
    }
    fn window(&self) -> Option<usize> {
        Some(self.window)
    }
    fn predict(&self, series: &PriceSeries, t: usize) -> Result<f64> {
        predict_lr(series, t, self.window)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Naive;

impl Predictor for Naive {
    fn name(&self) -> &str {
        "naive"
    }
    fn history(&self) -> usize {
        1
    }
    fn predict(&self, series: &PriceSeries, t: usize) -> Result<f64> {
        predict_naive(series, t)
    }
}

/// Registry entry as serialized into reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegistryEntry {
    pub id: MethodId,
    pub name: String,
    pub window: Option<usize>,
}

/// An ordered set of at least two predictors with unique names, numbered `1..=m`.
#[derive(Debug, Clone)]
pub struct PredictorRegistry {
    predictors: Vec<Arc<dyn Predictor>>,
}

impl PredictorRegistry {
    pub fn new(predictors: Vec<Arc<dyn Predictor>>) -> Result<Self> {
        if predictors.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "a registry needs at least 2 predictors, got {}",
                predictors.len()
            )));
        }
        for (i, p) in predictors.iter().enumerate() {
            if p.history() == 0 {
                return Err(Error::InvalidConfig(format!(
                    "predictor `{}` has a zero window",
                    p.name()
                )));
            }
            if predictors[..i].iter().any(|q| q.name() == p.name()) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate predictor name `{}`",
                    p.name()
                )));
            }
        }
        Ok(Self { predictors })
    }

    /// `{1: MA(window), 2: LR(window)}`, plus `3: naive` when requested.
    pub fn standard(window: usize, include_naive: bool) -> Result<Self> {
        if window < 2 {
            return Err(Error::InvalidConfig(format!(
                "window must be at least 2, got {window}"
            )));
        }
        let mut predictors: Vec<Arc<dyn Predictor>> = vec![
            Arc::new(MovingAverage { window }),
            Arc::new(LinearRegression { window }),
        ];
        if include_naive {
            predictors.push(Arc::new(Naive));
        }
        Self::new(predictors)
    }

    /// Number of registered methods.
    pub fn len(&self) -> usize {
        self.predictors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predictors.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = MethodId> + '_ {
        (1..=self.predictors.len()).map(MethodId)
    }

    pub fn get(&self, id: MethodId) -> Result<&dyn Predictor> {
        id.0.checked_sub(1)
            .and_then(|i| self.predictors.get(i))
            .map(|p| p.as_ref())
            .ok_or(Error::UnknownMethod(id))
    }

    pub fn id_of(&self, name: &str) -> Option<MethodId> {
        self.predictors
            .iter()
            .position(|p| p.name() == name)
            .map(|i| MethodId(i + 1))
    }

    /// Longest history any registered predictor reads.
    pub fn max_history(&self) -> usize {
        self.predictors
            .iter()
            .map(|p| p.history())
            .max()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> Vec<RegistryEntry> {
        self.predictors
            .iter()
            .enumerate()
            .map(|(i, p)| RegistryEntry {
                id: MethodId(i + 1),
                name: p.name().to_string(),
                window: p.window(),
            })
            .collect()
    }

    pub fn predict_by_id(&self, id: MethodId, series: &PriceSeries, t: usize) -> Result<f64> {
        self.get(id)?.predict(series, t)
    }

    /// Every method's prediction of `close(t + 1)`, in id order.
    pub fn predict_all(&self, series: &PriceSeries, t: usize) -> Result<Vec<f64>> {
        self.predictors
            .iter()
            .map(|p| p.predict(series, t))
            .collect()
    }
}
