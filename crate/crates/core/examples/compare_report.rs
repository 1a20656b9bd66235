//! Score several strategies on the same days and build a JSON report.
//!
//! cargo run --example compare_report

use forecast_select::market_data::generate;
use forecast_select::report::{EvaluationReport, RunConfig, Source};
use forecast_select::{Settings, Strategy, SynthSpec};

fn main() -> forecast_select::Result<()> {
    let spec = SynthSpec::reference_noisy_regime(7);
    let series = generate(&spec)?;
    let settings = Settings::standard(5, true)?;
    let config = RunConfig {
        source: Source::Synth(spec),
        symbol: series.symbol().to_string(),
        strategies: vec![
            Strategy::Ea,
            Strategy::Er,
            Strategy::Ma,
            Strategy::Lr,
            Strategy::Naive,
        ],
        registry: settings
            .registry
            .entries()
            .into_iter()
            .map(Into::into)
            .collect(),
        ea: settings.ea,
        er: settings.er,
        theta: 0.0,
    };
    let report = EvaluationReport::evaluate(&series, &settings, config)?;

    println!(
        "{:<6} {:>5} {:>9} {:>9} {:>9} {:>9} {:>8}",
        "", "days", "mae", "mre", "rmse", "annual%", "switches"
    );
    for (name, m) in &report.strategies {
        println!(
            "{name:<6} {:>5} {:>9.4} {:>9.5} {:>9.4} {:>9.2} {:>8}",
            m.days, m.mean_abs_error, m.mean_rel_error, m.rmse, m.annual_return_pct, m.switches
        );
    }
    println!(
        "real-price benchmark {:.2}%",
        report.backtest.benchmark.annual_return_pct
    );

    // Everything above can be recomputed from the embedded trace.
    report.verify(1e-9)?;
    let json = report.to_json();
    println!(
        "report is {} bytes of JSON; round trip ok = {}",
        json.len(),
        EvaluationReport::from_json(&json).ok() == Some(report)
    );
    Ok(())
}
