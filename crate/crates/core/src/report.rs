//! Evaluation reports: metrics, traces and backtests for one or more strategies
//! run on the same days, serialized as JSON or CSV.
//!
//! Every number in a report can be recomputed from its trace rows plus
//! `backtest.anchor_close` (the close on the day before the first predicted
//! day); see [`EvaluationReport::verify`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::backtest::{
    backtest_closes, backtest_trace, benchmark_signals, generate_signals, real_price_benchmark,
    signal_agreement, trace_window, BacktestReport,
};
use crate::ea::EaConfig;
use crate::er::ErConfig;
use crate::error::{Error, Result};
use crate::market_data::{PriceSeries, SynthSpec};
use crate::metrics::{mean_abs_error, mean_rel_error, rmse, SelectionTrace, TraceRow};
use crate::predictors::RegistryEntry;
use crate::strategy::{run_aligned, Settings, Strategy};

/// Where the series came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Csv(String),
    Synth(SynthSpec),
}

/// The run configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub source: Source,
    pub symbol: String,
    pub strategies: Vec<Strategy>,
    pub registry: Vec<RegistryEntryJson>,
    pub ea: EaConfig,
    pub er: ErConfig,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntryJson {
    pub id: usize,
    pub name: String,
    pub window: Option<usize>,
}

impl From<RegistryEntry> for RegistryEntryJson {
    fn from(e: RegistryEntry) -> Self {
        Self {
            id: e.id.0,
            name: e.name,
            window: e.window,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyMetrics {
    pub days: usize,
    pub mean_abs_error: f64,
    pub mean_rel_error: f64,
    pub rmse: f64,
    pub annual_return_pct: f64,
    pub signal_agreement: f64,
    pub switches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSection {
    /// Series day of backtest day 1 (trade days are relative to it).
    pub first_day: usize,
    pub anchor_close: f64,
    pub theta: f64,
    pub benchmark: BacktestReport,
    pub strategies: BTreeMap<String, BacktestReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub config: RunConfig,
    pub strategies: BTreeMap<String, StrategyMetrics>,
    pub trace: BTreeMap<String, Vec<TraceRow>>,
    pub backtest: BacktestSection,
}

impl EvaluationReport {
    /// Runs `config.strategies` on common days and scores them.
    pub fn evaluate(series: &PriceSeries, settings: &Settings, config: RunConfig) -> Result<Self> {
        let runs = run_aligned(&config.strategies, series, settings)?;
        let theta = config.theta;
        let window = trace_window(&runs[0].1, series)?;

        let mut strategies = BTreeMap::new();
        let mut trace = BTreeMap::new();
        let mut backtests = BTreeMap::new();
        for (strategy, t) in &runs {
            let bt = backtest_trace(t, series, theta)?;
            strategies.insert(
                strategy.name().to_string(),
                StrategyMetrics {
                    days: t.len(),
                    mean_abs_error: mean_abs_error(t)?,
                    mean_rel_error: mean_rel_error(t)?,
                    rmse: rmse(t)?,
                    annual_return_pct: bt.annual_return_pct,
                    signal_agreement: signal_agreement(t, series, theta)?,
                    switches: t.switches(),
                },
            );
            trace.insert(strategy.name().to_string(), t.rows.clone());
            backtests.insert(strategy.name().to_string(), bt);
        }

        let first_day = runs[0].1.first_day().ok_or(Error::EmptyTrace)? - 1;
        Ok(Self {
            config,
            strategies,
            trace,
            backtest: BacktestSection {
                first_day,
                anchor_close: window.closes()[0],
                theta,
                benchmark: real_price_benchmark(&window, theta)?,
                strategies: backtests,
            },
        })
    }

    /// Recomputes every metric and backtest from the embedded trace rows and
    /// checks them against the stored values to within `tol`.
    pub fn verify(&self, tol: f64) -> Result<()> {
        let mismatch = |what: String| Err(Error::Misaligned(what));
        let close = |a: f64, b: f64| (a - b).abs() <= tol * (1.0 + b.abs());
        let anchor = self.backtest.anchor_close;
        let theta = self.backtest.theta;

        let mut reference_path: Option<Vec<f64>> = None;
        for (name, metrics) in &self.strategies {
            let rows = self
                .trace
                .get(name)
                .ok_or_else(|| Error::Misaligned(format!("no trace for `{name}`")))?;
            let t = SelectionTrace::new(rows.clone());
            let recomputed = [
                (
                    "mean_abs_error",
                    mean_abs_error(&t)?,
                    metrics.mean_abs_error,
                ),
                (
                    "mean_rel_error",
                    mean_rel_error(&t)?,
                    metrics.mean_rel_error,
                ),
                ("rmse", rmse(&t)?, metrics.rmse),
            ];
            for (what, got, stored) in recomputed {
                if !close(got, stored) {
                    return mismatch(format!("{name}.{what}: recomputed {got}, stored {stored}"));
                }
            }
            for r in rows {
                if !close((r.predicted - r.actual).abs(), r.abs_err)
                    || !close(r.abs_err / r.actual, r.rel_err)
                {
                    return mismatch(format!("{name} row for day {} is inconsistent", r.day));
                }
            }

            let path: Vec<f64> = std::iter::once(anchor)
                .chain(rows.iter().map(|r| r.actual))
                .collect();
            if let Some(p) = &reference_path {
                if p != &path {
                    return mismatch(format!("{name} was evaluated on different days"));
                }
            }
            let predicted: Vec<f64> = rows.iter().map(|r| r.predicted).collect();
            let signals = generate_signals(&path[..rows.len()], &predicted, theta)?;
            let bt = backtest_closes(&path, &signals)?;
            if !close(bt.annual_return_pct, metrics.annual_return_pct) {
                return mismatch(format!(
                    "{name}.annual_return_pct: recomputed {}, stored {}",
                    bt.annual_return_pct, metrics.annual_return_pct
                ));
            }
            if self.backtest.strategies.get(name) != Some(&bt) {
                return mismatch(format!("{name} backtest ledger differs from recomputation"));
            }
            let real = benchmark_signals(&path, theta)?;
            let agree = signals.iter().zip(&real).filter(|(a, b)| a == b).count() as f64
                / signals.len() as f64;
            if !close(agree, metrics.signal_agreement) {
                return mismatch(format!("{name}.signal_agreement: recomputed {agree}"));
            }
            if reference_path.is_none() {
                let bench = backtest_closes(&path, &real)?;
                if bench != self.backtest.benchmark {
                    return mismatch("benchmark differs from recomputation".into());
                }
            }
            reference_path = Some(path);
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Trace rows as CSV. A single strategy gets the plain
    /// `day,method_id,predicted,actual,abs_err,rel_err` layout; several get a
    /// leading `strategy` column.
    pub fn trace_csv(&self) -> String {
        let multi = self.trace.len() > 1;
        let mut out = String::new();
        if multi {
            out.push_str("strategy,");
        }
        out.push_str("day,method_id,predicted,actual,abs_err,rel_err\n");
        for strategy in &self.config.strategies {
            let Some(rows) = self.trace.get(strategy.name()) else {
                continue;
            };
            for r in rows {
                if multi {
                    let _ = write!(out, "{strategy},");
                }
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.day, r.method_id, r.predicted, r.actual, r.abs_err, r.rel_err
                );
            }
        }
        out
    }

    /// Trade ledgers as CSV, with days expressed as series days. The real-price
    /// benchmark appears under the name `real`.
    pub fn trades_csv(&self) -> String {
        let offset = self.backtest.first_day - 1;
        let mut out = String::from("strategy,entry_day,entry_price,exit_day,exit_price\n");
        let ledgers = std::iter::once(("real", &self.backtest.benchmark)).chain(
            self.config.strategies.iter().filter_map(|s| {
                self.backtest
                    .strategies
                    .get(s.name())
                    .map(|b| (s.name(), b))
            }),
        );
        for (name, bt) in ledgers {
            for tr in &bt.trades {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{}",
                    tr.entry_day + offset,
                    tr.entry_price,
                    tr.exit_day + offset,
                    tr.exit_price
                );
            }
        }
        out
    }
}
