//! Error Analysis selection.
//!
//! The controller predicts with the method that most often had the smallest
//! daily error over the last `k` days. Every `p` days it re-counts. When the
//! incumbent's share of wins has fallen below its reference share, the count is
//! repeated over the last `k_short` days: if the incumbent holds up there the
//! drop is treated as transient and the incumbent stays, otherwise control
//! passes to the best method other than the incumbent.
//!
//! Shares are compared as fractions (`wins / window`) so that the long and
//! short windows are comparable. Ties always go to the lowest [`MethodId`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::error_table::DailyErrorTable;
use crate::market_data::PriceSeries;
use crate::metrics::{SelectionTrace, TraceRow};
use crate::predictors::{MethodId, PredictorRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EaConfig {
    /// Long window, in days, over which wins are counted.
    pub k: usize,
    /// Days between checkpoints.
    pub p: usize,
    /// Confirmation window used when the incumbent's share drops.
    pub k_short: usize,
    /// First decision day. `None` means `k + registry.max_history()`.
    pub warmup: Option<usize>,
}

impl Default for EaConfig {
    fn default() -> Self {
        Self {
            k: 20,
            p: 5,
            k_short: 10,
            warmup: None,
        }
    }
}

impl EaConfig {
    pub fn warmup(&self, registry: &PredictorRegistry) -> usize {
        self.warmup.unwrap_or(self.k + registry.max_history())
    }

    pub fn validate(&self, registry: &PredictorRegistry) -> Result<()> {
        if self.k_short == 0 || self.k_short >= self.k {
            return Err(Error::InvalidConfig(format!(
                "EA needs 1 <= k_short < k, got k_short={} k={}",
                self.k_short, self.k
            )));
        }
        if self.p == 0 {
            return Err(Error::InvalidConfig(
                "EA checkpoint period must be >= 1".into(),
            ));
        }
        let min = self.k + registry.max_history();
        if self.warmup(registry) < min {
            return Err(Error::InvalidConfig(format!(
                "EA warmup must be at least k + max window = {min}, got {}",
                self.warmup(registry)
            )));
        }
        Ok(())
    }
}

/// Controller state carried between days.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EaState {
    pub current: MethodId,
    /// Reference share of wins for `current`, in `[0, 1]`.
    pub sr_ref: f64,
    pub last_checkpoint: usize,
}

/// Wins per method over a window. Index `j` holds method `j + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessCounts {
    counts: Vec<usize>,
}

impl SuccessCounts {
    pub fn get(&self, id: MethodId) -> usize {
        id.0.checked_sub(1)
            .and_then(|j| self.counts.get(j))
            .copied()
            .unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Method with the most wins; lowest id on ties.
    pub fn best(&self) -> MethodId {
        self.best_excluding(None)
    }

    /// Method with the most wins other than `excluded`; lowest id on ties.
    pub fn runner_up(&self, excluded: MethodId) -> MethodId {
        self.best_excluding(Some(excluded))
    }

    fn best_excluding(&self, excluded: Option<MethodId>) -> MethodId {
        let mut best: Option<(usize, usize)> = None;
        for (j, &c) in self.counts.iter().enumerate() {
            if Some(MethodId(j + 1)) == excluded {
                continue;
            }
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((j, c));
            }
        }
        MethodId(best.map_or(0, |(j, _)| j) + 1)
    }
}

/// Credits each of the days `end-w+1..=end` to the method with the smallest
/// error that day.
pub fn success_ratio(errors: &DailyErrorTable, end: usize, w: usize) -> Result<SuccessCounts> {
    if w == 0 {
        return Err(Error::InvalidConfig(
            "success-ratio window must be >= 1".into(),
        ));
    }
    if end < w {
        return Err(Error::WindowUnavailable {
            t: end,
            k: w,
            len: errors.last_day().unwrap_or(0),
        });
    }
    let mut counts = vec![0; errors.methods()];
    for day in end + 1 - w..=end {
        let best = errors.best_on(day)?;
        counts[best.0 - 1] += 1;
    }
    Ok(SuccessCounts { counts })
}

fn share(counts: &SuccessCounts, id: MethodId, w: usize) -> f64 {
    counts.get(id) as f64 / w as f64
}

/// Initial state at decision day `t`: the method with the most wins over the
/// `k` days ending at `t`.
pub fn ea_init(errors: &DailyErrorTable, cfg: &EaConfig, t: usize) -> Result<EaState> {
    let counts = success_ratio(errors, t, cfg.k)?;
    let current = counts.best();
    Ok(EaState {
        current,
        sr_ref: share(&counts, current, cfg.k),
        last_checkpoint: t,
    })
}

/// Advances the controller to decision day `t` and returns the new state with
/// the method to use for predicting day `t + 1`.
pub fn ea_step(
    state: EaState,
    cfg: &EaConfig,
    errors: &DailyErrorTable,
    t: usize,
) -> Result<(EaState, MethodId)> {
    if t < state.last_checkpoint + cfg.p {
        return Ok((state, state.current));
    }
    let long = success_ratio(errors, t, cfg.k)?;
    let sr_now = share(&long, state.current, cfg.k);

    let next = if sr_now >= state.sr_ref {
        EaState {
            sr_ref: sr_now,
            last_checkpoint: t,
            ..state
        }
    } else {
        let short = success_ratio(errors, t, cfg.k_short)?;
        if share(&short, state.current, cfg.k_short) >= state.sr_ref {
            EaState {
                sr_ref: sr_now,
                last_checkpoint: t,
                ..state
            }
        } else {
            let runner_up = long.runner_up(state.current);
            EaState {
                current: runner_up,
                sr_ref: share(&long, runner_up, cfg.k),
                last_checkpoint: t,
            }
        }
    };
    Ok((next, next.current))
}

/// Runs Error Analysis over the whole series. One row per decision day
/// `t = warmup..len-1`, predicting day `t + 1`.
pub fn ea_run(
    series: &PriceSeries,
    registry: &PredictorRegistry,
    cfg: &EaConfig,
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
    let mut state = ea_init(&errors, cfg, warmup)?;
    let mut rows = Vec::with_capacity(series.len() - warmup);
    for t in warmup..series.len() {
        if t > warmup {
            errors.record(series, registry, t)?;
        }
        let (next, method) = ea_step(state, cfg, &errors, t)?;
        state = next;
        let predicted = registry.predict_by_id(method, series, t)?;
        let actual = series.close(t + 1).expect("t + 1 <= len");
        rows.push(TraceRow::new(t + 1, method, predicted, actual));
    }
    Ok(SelectionTrace::new(rows))
}
