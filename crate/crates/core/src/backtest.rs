//! Long-only signal backtests and annualized returns.
//!
//! A signal on day `t` decides the position held from `close(t)` to
//! `close(t + 1)`, so a price path of `n + 1` closes carries `n` signals. A
//! position still open after the last signal is closed at the final close.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::PriceSeries;
use crate::metrics::SelectionTrace;

pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signal {
    Long,
    Flat,
}

/// Go long when the lookahead exceeds today's close by more than `theta`
/// (as a fraction), go flat when it falls short by more than `theta`, and
/// otherwise keep the previous signal. The first carry is flat.
pub fn generate_signals(path: &[f64], lookahead: &[f64], theta: f64) -> Result<Vec<Signal>> {
    if path.len() != lookahead.len() {
        return Err(Error::Misaligned(format!(
            "{} closes but {} lookahead values",
            path.len(),
            lookahead.len()
        )));
    }
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "theta must be >= 0, got {theta}"
        )));
    }
    let mut prev = Signal::Flat;
    Ok(path
        .iter()
        .zip(lookahead)
        .map(|(&close, &ahead)| {
            if ahead > close * (1.0 + theta) {
                prev = Signal::Long;
            } else if ahead < close * (1.0 - theta) {
                prev = Signal::Flat;
            }
            prev
        })
        .collect())
}

/// A round trip. Days are 1-based positions in the backtested series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trade {
    pub entry_day: usize,
    pub entry_price: f64,
    pub exit_day: usize,
    pub exit_price: f64,
}

impl Trade {
    pub fn multiple(&self) -> f64 {
        self.exit_price / self.entry_price
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestReport {
    pub signals: Vec<Signal>,
    pub trades: Vec<Trade>,
    pub equity_multiple: f64,
    pub annual_return_pct: f64,
}

impl BacktestReport {
    /// Number of evaluated days (one-day holding periods).
    pub fn days(&self) -> usize {
        self.signals.len()
    }
}

/// Geometric annualization of an equity multiple earned over `days` trading days.
pub fn annualize(equity_multiple: f64, days: usize) -> f64 {
    (equity_multiple.powf(TRADING_DAYS_PER_YEAR / days as f64) - 1.0) * 100.0
}

/// All-in, long-only replay of `signals` over `series`. Entries and exits
/// execute at the close of the signalling day.
pub fn run_backtest(series: &PriceSeries, signals: &[Signal]) -> Result<BacktestReport> {
    backtest_closes(series.closes(), signals)
}

pub(crate) fn backtest_closes(closes: &[f64], signals: &[Signal]) -> Result<BacktestReport> {
    if signals.is_empty() || closes.len() != signals.len() + 1 {
        return Err(Error::Misaligned(format!(
            "{} signals need {} closes, got {}",
            signals.len(),
            signals.len() + 1,
            closes.len()
        )));
    }
    let mut trades = Vec::new();
    let mut open: Option<usize> = None;
    for (i, &s) in signals.iter().enumerate() {
        match (s, open) {
            (Signal::Long, None) => open = Some(i),
            (Signal::Flat, Some(entry)) => {
                trades.push(Trade {
                    entry_day: entry + 1,
                    entry_price: closes[entry],
                    exit_day: i + 1,
                    exit_price: closes[i],
                });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(entry) = open {
        let last = closes.len() - 1;
        trades.push(Trade {
            entry_day: entry + 1,
            entry_price: closes[entry],
            exit_day: last + 1,
            exit_price: closes[last],
        });
    }
    let equity_multiple = trades.iter().map(Trade::multiple).product::<f64>();
    Ok(BacktestReport {
        annual_return_pct: annualize(equity_multiple, signals.len()),
        signals: signals.to_vec(),
        trades,
        equity_multiple,
    })
}

/// Signals from perfect one-step foresight (`lookahead[t] = close(t + 1)`).
pub fn benchmark_signals(closes: &[f64], theta: f64) -> Result<Vec<Signal>> {
    if closes.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            len: closes.len(),
        });
    }
    generate_signals(&closes[..closes.len() - 1], &closes[1..], theta)
}

/// The backtest obtained by trading on the real next-day close.
pub fn real_price_benchmark(series: &PriceSeries, theta: f64) -> Result<BacktestReport> {
    let signals = benchmark_signals(series.closes(), theta)?;
    run_backtest(series, &signals)
}

/// The stretch of `series` a trace trades over: the day before the first
/// predicted day through the last predicted day.
pub fn trace_window(trace: &SelectionTrace, series: &PriceSeries) -> Result<PriceSeries> {
    let first = trace.first_day().ok_or(Error::EmptyTrace)?;
    for (i, row) in trace.rows.iter().enumerate() {
        if row.day != first + i {
            return Err(Error::Misaligned(format!(
                "trace rows are not consecutive at day {}",
                row.day
            )));
        }
    }
    if first < 2 {
        return Err(Error::Misaligned(
            "trace predicts day 1, which has no prior close".into(),
        ));
    }
    series.slice_days(first - 1, first - 1 + trace.len())
}

/// Signals driven by a trace's predictions over [`trace_window`].
pub fn trace_signals(
    trace: &SelectionTrace,
    window: &PriceSeries,
    theta: f64,
) -> Result<Vec<Signal>> {
    let closes = window.closes();
    if closes.len() != trace.len() + 1 {
        return Err(Error::Misaligned(format!(
            "window of {} closes for a trace of {} rows",
            closes.len(),
            trace.len()
        )));
    }
    generate_signals(&closes[..trace.len()], &trace.predictions(), theta)
}

/// Backtest of the signals a trace's predictions generate.
pub fn backtest_trace(
    trace: &SelectionTrace,
    series: &PriceSeries,
    theta: f64,
) -> Result<BacktestReport> {
    let window = trace_window(trace, series)?;
    run_backtest(&window, &trace_signals(trace, &window, theta)?)
}

/// Fraction of evaluated days on which the prediction-driven signal equals the
/// signal driven by the real next-day close.
pub fn signal_agreement(trace: &SelectionTrace, series: &PriceSeries, theta: f64) -> Result<f64> {
    let window = trace_window(trace, series)?;
    let predicted = trace_signals(trace, &window, theta)?;
    let real = benchmark_signals(window.closes(), theta)?;
    let same = predicted.iter().zip(&real).filter(|(a, b)| a == b).count();
    Ok(same as f64 / predicted.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::TraceRow;
    use crate::predictors::MethodId;
    use Signal::{Flat, Long};

    fn series(closes: &[f64]) -> PriceSeries {
        PriceSeries::from_closes("B", closes).unwrap()
    }

    #[test]
    fn signal_rule() {
        let flat = [10.0; 4];
        assert_eq!(
            generate_signals(&flat, &[11.0, 12.0, 13.0, 14.0], 0.0).unwrap(),
            vec![Long; 4]
        );
        assert_eq!(
            generate_signals(&flat, &[9.0, 8.0, 7.0, 6.0], 0.0).unwrap(),
            vec![Flat; 4]
        );
        // Inside the band the previous signal carries.
        assert_eq!(
            generate_signals(&flat, &[10.5, 11.5, 9.5, 8.0], 0.1).unwrap(),
            vec![Flat, Long, Long, Flat]
        );
        assert!(matches!(
            generate_signals(&flat, &[11.0, 10.0, 9.0], 0.0),
            Err(Error::Misaligned(_))
        ));
        // Equality with theta = 0 carries too.
        assert_eq!(
            generate_signals(&[10.0, 10.0], &[11.0, 10.0], 0.0).unwrap(),
            vec![Long, Long]
        );
        assert!(generate_signals(&flat, &flat, -0.1).is_err());
    }

    #[test]
    fn single_trade_full_year() {
        let mut closes = vec![100.0; 253];
        closes[252] = 110.0;
        let signals = vec![Long; 252];
        let r = run_backtest(&series(&closes), &signals).unwrap();
        assert_eq!(r.trades.len(), 1);
        assert!((r.equity_multiple - 1.1).abs() < 1e-12);
        assert!((r.annual_return_pct - 10.0).abs() < 1e-9);
    }

    #[test]
    fn all_flat_is_zero() {
        let r = run_backtest(&series(&[1.0, 2.0, 3.0]), &[Flat, Flat]).unwrap();
        assert!(r.trades.is_empty());
        assert_eq!(r.equity_multiple, 1.0);
        assert_eq!(r.annual_return_pct, 0.0);
    }

    #[test]
    fn hand_ledger() {
        // Long on day 1 (100), flat on day 3 (102), long on day 4 (108), still long at end (107).
        let s = series(&[100.0, 104.0, 102.0, 108.0, 107.0]);
        let r = run_backtest(&s, &[Long, Long, Flat, Long]).unwrap();
        assert_eq!(
            r.trades,
            vec![
                Trade {
                    entry_day: 1,
                    entry_price: 100.0,
                    exit_day: 3,
                    exit_price: 102.0
                },
                Trade {
                    entry_day: 4,
                    entry_price: 108.0,
                    exit_day: 5,
                    exit_price: 107.0
                },
            ]
        );
        let hand = (102.0 / 100.0) * (107.0 / 108.0);
        assert!((r.equity_multiple - hand).abs() < 1e-12);
        assert!((r.annual_return_pct - (hand.powf(252.0 / 4.0) - 1.0) * 100.0).abs() < 1e-9);
    }

    #[test]
    fn misaligned_backtest() {
        let s = series(&[1.0, 2.0, 3.0]);
        assert!(run_backtest(&s, &[Long]).is_err());
        assert!(run_backtest(&s, &[Long, Long, Long]).is_err());
        assert!(real_price_benchmark(&series(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn benchmark_monotone_paths() {
        let up: Vec<f64> = (1..=30).map(|x| 50.0 + x as f64).collect();
        let r = real_price_benchmark(&series(&up), 0.0).unwrap();
        assert!(r.signals.iter().all(|&s| s == Long));
        let hold = up[29] / up[0];
        assert!((r.equity_multiple - hold).abs() < 1e-12);
        assert!((r.annual_return_pct - annualize(hold, 29)).abs() < 1e-9);

        let down: Vec<f64> = up.iter().rev().copied().collect();
        let r = real_price_benchmark(&series(&down), 0.0).unwrap();
        assert!(r.trades.is_empty());
        assert_eq!(r.annual_return_pct, 0.0);
    }

    fn trace_from(predicted: &[f64], closes: &[f64], first_day: usize) -> SelectionTrace {
        SelectionTrace::new(
            predicted
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let day = first_day + i;
                    TraceRow::new(day, MethodId(1), p, closes[day - 1])
                })
                .collect(),
        )
    }

    #[test]
    fn perfect_trace_reproduces_benchmark() {
        let closes = [10.0, 11.0, 10.5, 12.0, 11.0, 11.5, 13.0];
        let s = series(&closes);
        let trace = trace_from(&closes[2..], &closes, 3);
        let window = trace_window(&trace, &s).unwrap();
        assert_eq!(window.closes(), &closes[1..]);
        assert_eq!(
            backtest_trace(&trace, &s, 0.0).unwrap(),
            real_price_benchmark(&window, 0.0).unwrap()
        );
        assert_eq!(signal_agreement(&trace, &s, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn constant_prediction_on_rising_series() {
        let closes: Vec<f64> = (1..=11).map(|x| x as f64).collect();
        let s = series(&closes);
        // Predicting 5.5 for days 2..=11 from closes on days 1..=10: long while close < 5.5.
        let trace = trace_from(&[5.5; 10], &closes, 2);
        // Real signals are all long; predicted ones are long on days 1..=5 only.
        assert_eq!(signal_agreement(&trace, &s, 0.0).unwrap(), 0.5);
        assert!(matches!(
            signal_agreement(&SelectionTrace::default(), &s, 0.0),
            Err(Error::EmptyTrace)
        ));
    }
}
