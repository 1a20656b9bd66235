//! Error Analysis on a series that switches from trend to oscillation at day 126.
//!
//! cargo run --example error_analysis [seed]

use forecast_select::ea::{ea_run, success_ratio, EaConfig};
use forecast_select::error_table::DailyErrorTable;
use forecast_select::market_data::generate;
use forecast_select::metrics::mean_abs_error;
use forecast_select::{PredictorRegistry, SynthSpec};

fn main() -> forecast_select::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let series = generate(&SynthSpec::reference_noisy_regime(seed))?;
    let reg = PredictorRegistry::standard(5, true)?;
    let cfg = EaConfig::default();

    let trace = ea_run(&series, &reg, &cfg)?;
    println!(
        "EA k={} p={} k_short={}: {} predicted days",
        cfg.k,
        cfg.p,
        cfg.k_short,
        trace.len()
    );
    let mut prev = None;
    for row in &trace.rows {
        if prev != Some(row.method_id) {
            let name = reg.get(row.method_id)?.name();
            println!("  from day {:>3} use {name}", row.day);
            prev = Some(row.method_id);
        }
    }

    // Wins over the last 20 days, around the switch.
    let errors = DailyErrorTable::build(&series, &reg, series.len())?;
    for end in [100, 126, 150, 200] {
        println!(
            "  wins over days {}..={end}: {:?}",
            end - 19,
            success_ratio(&errors, end, 20)?.as_slice()
        );
    }
    println!("EA mean absolute error {:.4}", mean_abs_error(&trace)?);
    Ok(())
}
