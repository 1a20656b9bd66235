//! Trade on predictions and compare against trading on the real next close.
//!
//! cargo run --example backtest [theta]

use forecast_select::backtest::{
    backtest_trace, real_price_benchmark, signal_agreement, trace_window,
};
use forecast_select::market_data::generate;
use forecast_select::strategy::run_strategy;
use forecast_select::{Settings, Strategy, SynthSpec};

fn main() -> forecast_select::Result<()> {
    let theta: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.0);
    let series = generate(&SynthSpec::reference_smooth(3))?;
    let settings = Settings::standard(5, true)?;

    for strategy in [Strategy::Ma, Strategy::Lr, Strategy::Ea, Strategy::Er] {
        let trace = run_strategy(strategy, &series, &settings)?;
        let report = backtest_trace(&trace, &series, theta)?;
        let bench = real_price_benchmark(&trace_window(&trace, &series)?, theta)?;
        println!(
            "{:<5} annual return {:>7.2}%  (real prices {:>7.2}%)  trades {:>3}  agreement {:.3}",
            strategy.name(),
            report.annual_return_pct,
            bench.annual_return_pct,
            report.trades.len(),
            signal_agreement(&trace, &series, theta)?
        );
    }

    let trace = run_strategy(Strategy::Lr, &series, &settings)?;
    let report = backtest_trace(&trace, &series, theta)?;
    println!("first LR trades:");
    for t in report.trades.iter().take(3) {
        println!(
            "  buy day {} at {:.2}, sell day {} at {:.2}",
            t.entry_day, t.entry_price, t.exit_day, t.exit_price
        );
    }
    Ok(())
}
