//! Generate the synthetic recipes, write one to CSV and read it back.
//!
//! cargo run --example synthetic_data

use forecast_select::market_data::{generate, load_csv, save_csv, SynthKind};
use forecast_select::SynthSpec;

fn main() -> forecast_select::Result<()> {
    let specs = [
        SynthSpec::new(SynthKind::Constant { base: 7.0 }, 10, 0),
        SynthSpec::new(
            SynthKind::Linear {
                base: 1.0,
                slope: 2.0,
            },
            5,
            0,
        ),
        SynthSpec::reference_noisy_regime(42),
        SynthSpec::reference_smooth(42),
    ];
    for spec in &specs {
        let series = generate(spec)?;
        let closes = series.closes();
        let head: Vec<String> = closes.iter().take(5).map(|c| format!("{c:.3}")).collect();
        println!(
            "{:<24} {} days, first closes [{}], last {:.3}",
            series.symbol(),
            series.len(),
            head.join(", "),
            closes[closes.len() - 1]
        );
    }

    let series = generate(&specs[2])?;
    let dir = std::env::temp_dir().join("forecast-select-example");
    std::fs::create_dir_all(&dir).map_err(|source| forecast_select::Error::Io {
        path: dir.clone(),
        source,
    })?;
    let path = dir.join("regime.csv");
    save_csv(&series, &path)?;
    let back = load_csv(&path)?;
    println!(
        "wrote {} and reloaded it: identical = {}",
        path.display(),
        back.closes() == series.closes()
    );

    // A window is the k closes ending at day t, oldest first.
    println!("window(t=130, k=5) = {:?}", series.window(130, 5)?);
    Ok(())
}
