//! Error Regression: extrapolate the index of tomorrow's best method.
//!
//! cargo run --example error_regression

use forecast_select::er::{er_run, interpolate_index, resolve_index, ErConfig, IndexSeries};
use forecast_select::market_data::generate;
use forecast_select::metrics::mean_rel_error;
use forecast_select::{MethodId, PredictorRegistry, SynthSpec};

fn main() -> forecast_select::Result<()> {
    // Methods 1, 1, 4 were best on days 1..=3 out of four methods.
    let points = IndexSeries::new(
        vec![(1, MethodId(1)), (2, MethodId(1)), (3, MethodId(4))],
        4,
    )?;
    let poly = interpolate_index(&points)?;
    let raw = poly.eval(4.0);
    println!("I(x) coefficients (constant first): {:?}", poly.coeffs());
    println!(
        "I(4) = {raw}, resolved to method {}",
        resolve_index(raw, 4)?
    );
    for r in [-3.2, 0.4, 2.9, 7.5] {
        println!("  resolve_index({r}, 4) = {}", resolve_index(r, 4)?);
    }

    let series = generate(&SynthSpec::reference_smooth(1))?;
    let reg = PredictorRegistry::standard(5, true)?;
    let trace = er_run(&series, &reg, &ErConfig::default())?;
    let mut used = [0usize; 3];
    for id in trace.methods() {
        used[id.0 - 1] += 1;
    }
    println!(
        "ER on a smooth series: {} days, picks ma/lr/naive {:?}, mean relative error {:.5}",
        trace.len(),
        used,
        mean_rel_error(&trace)?
    );
    Ok(())
}
