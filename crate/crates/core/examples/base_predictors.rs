//! The three base predictors on a few hand-made series.
//!
//! cargo run --example base_predictors

use forecast_select::predictors::{predict_lr, predict_ma, predict_naive};
use forecast_select::{PredictorRegistry, PriceSeries};

fn main() -> forecast_select::Result<()> {
    let line = PriceSeries::from_closes("line", &[3.0, 5.0, 7.0, 9.0, 11.0])?;
    let bumpy = PriceSeries::from_closes("bumpy", &[10.0, 12.0, 9.0, 11.0, 13.0, 10.0, 12.0])?;

    for s in [&line, &bumpy] {
        let t = s.len();
        println!(
            "{:<6} ma(5) {:>7.3}  lr(5) {:>7.3}  naive {:>7.3}",
            s.symbol(),
            predict_ma(s, t, 5)?,
            predict_lr(s, t, 5)?,
            predict_naive(s, t)?
        );
    }

    // The registry numbers predictors 1..=m; selectors refer to them by id.
    let reg = PredictorRegistry::standard(5, true)?;
    for entry in reg.entries() {
        println!(
            "method {} = {} (window {:?})",
            entry.id, entry.name, entry.window
        );
    }
    println!(
        "all predictions for day {}: {:?}",
        bumpy.len() + 1,
        reg.predict_all(&bumpy, bumpy.len())?
    );

    // Asking for more history than exists is an error, not a guess.
    if let Err(e) = predict_ma(&line, 3, 5) {
        println!("ma(5) at day 3: {e}");
    }
    Ok(())
}
