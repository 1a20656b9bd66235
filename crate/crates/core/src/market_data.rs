//! Daily close series: the data model, `date,close` CSV ingestion and seeded
//! synthetic generation.
//!
//! Days are addressed by 1-based row index. Day `t` is the `t`-th observation,
//! regardless of calendar gaps between rows.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closes are never generated below this level.
pub const PRICE_FLOOR: f64 = 0.01;

/// Seeds used for the reference recipe ensembles.
pub const REFERENCE_SEEDS: std::ops::RangeInclusive<u64> = 1..=20;

const DATE_FORMAT: &str = "%Y-%m-%d";

/// An immutable, validated series of daily closes for one symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceSeries {
    symbol: String,
    dates: Vec<NaiveDate>,
    closes: Vec<f64>,
}

impl PriceSeries {
    /// Builds a series from `(date, close)` pairs, checking that it is non-empty,
    /// that dates strictly increase and that every close is positive and finite.
    pub fn new(symbol: impl Into<String>, observations: Vec<(NaiveDate, f64)>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptySeries);
        }
        let mut dates = Vec::with_capacity(observations.len());
        let mut closes = Vec::with_capacity(observations.len());
        for (i, (date, close)) in observations.into_iter().enumerate() {
            check_row(i + 1, dates.last().copied(), date, close)?;
            dates.push(date);
            closes.push(close);
        }
        Ok(Self {
            symbol: symbol.into(),
            dates,
            closes,
        })
    }

    /// Builds a series on consecutive weekdays starting at 2021-01-04.
    pub fn from_closes(symbol: impl Into<String>, closes: &[f64]) -> Result<Self> {
        let dates = trading_days(closes.len());
        Self::new(
            symbol,
            dates.into_iter().zip(closes.iter().copied()).collect(),
        )
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    /// All closes, oldest first. Index `t - 1` holds day `t`.
    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    /// Close on 1-based day `t`.
    pub fn close(&self, t: usize) -> Option<f64> {
        t.checked_sub(1).and_then(|i| self.closes.get(i)).copied()
    }

    /// The `k` closes of days `t-k+1..=t`, oldest first.
    pub fn window(&self, t: usize, k: usize) -> Result<&[f64]> {
        if k == 0 || t < k || t > self.len() {
            return Err(Error::WindowUnavailable {
                t,
                k,
                len: self.len(),
            });
        }
        Ok(&self.closes[t - k..t])
    }

    /// Days `from..=to` as a new series.
    pub fn slice_days(&self, from: usize, to: usize) -> Result<Self> {
        if from == 0 || from > to || to > self.len() {
            return Err(Error::WindowUnavailable {
                t: to,
                k: to.saturating_sub(from) + 1,
                len: self.len(),
            });
        }
        Ok(Self {
            symbol: self.symbol.clone(),
            dates: self.dates[from - 1..to].to_vec(),
            closes: self.closes[from - 1..to].to_vec(),
        })
    }

    /// Every close multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.map_closes(|c| c * factor)
    }

    /// Every close shifted by `offset`.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        self.map_closes(|c| c + offset)
    }

    fn map_closes(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.symbol.clone(),
            self.dates
                .iter()
                .copied()
                .zip(self.closes.iter().map(|&c| f(c)))
                .collect(),
        )
    }
}

fn check_row(row: usize, prev: Option<NaiveDate>, date: NaiveDate, close: f64) -> Result<()> {
    if let Some(prev) = prev {
        if date <= prev {
            return Err(Error::BadRow {
                row,
                message: format!("non-increasing dates: {date} does not follow {prev}"),
            });
        }
    }
    if !close.is_finite() || close <= 0.0 {
        return Err(Error::BadRow {
            row,
            message: format!("close must be positive and finite, got {close}"),
        });
    }
    Ok(())
}

/// Loads a `date,close` CSV file. The symbol is taken from the file stem.
pub fn load_csv(path: impl AsRef<Path>) -> Result<PriceSeries> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let symbol = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_csv(file, symbol)
}

pub fn read_csv<R: Read>(reader: R, symbol: impl Into<String>) -> Result<PriceSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => {
            return Err(Error::MalformedHeader {
                found: e.to_string(),
            })
        }
        None => {
            return Err(Error::MalformedHeader {
                found: String::new(),
            })
        }
    };
    if header.len() != 2 || &header[0] != "date" || &header[1] != "close" {
        return Err(Error::MalformedHeader {
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut observations = Vec::new();
    let mut prev = None;
    for (i, record) in records.enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::BadRow {
            row,
            message: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(Error::BadRow {
                row,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let date =
            NaiveDate::parse_from_str(&record[0], DATE_FORMAT).map_err(|e| Error::BadRow {
                row,
                message: format!("unparsable date `{}`: {e}", &record[0]),
            })?;
        let close: f64 = record[1].parse().map_err(|_| Error::BadRow {
            row,
            message: format!("unparsable price `{}`", &record[1]),
        })?;
        check_row(row, prev, date, close)?;
        prev = Some(date);
        observations.push((date, close));
    }
    PriceSeries::new(symbol, observations)
}

/// Writes the series as `date,close` CSV. Closes use the shortest decimal
/// representation that parses back to the same `f64`.
pub fn write_csv<W: Write>(series: &PriceSeries, mut writer: W) -> std::io::Result<()> {
    writeln!(writer, "date,close")?;
    for (date, close) in series.dates.iter().zip(&series.closes) {
        writeln!(writer, "{},{}", date.format(DATE_FORMAT), close)?;
    }
    writer.flush()
}

pub fn save_csv(series: &PriceSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_csv(series, &mut buf).expect("writing to a Vec cannot fail");
    fs::write(path, buf).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `n` consecutive weekdays starting Monday 2021-01-04.
pub fn trading_days(n: usize) -> Vec<NaiveDate> {
    let mut day = NaiveDate::from_ymd_opt(2021, 1, 4).expect("valid date");
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(day);
        }
        day = day + Days::new(1);
    }
    out
}

/// Shape of a synthetic series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SynthKind {
    /// Every close equals `base`.
    Constant { base: f64 },
    /// `close(t) = base + slope * t`.
    Linear { base: f64, slope: f64 },
    /// A trending segment with light noise up to `switch_day`, then a
    /// mean-reverting oscillation around the level reached at the switch.
    /// The trend favours linear extrapolation and the oscillation favours
    /// averaging.
    NoisyRegime {
        base: f64,
        slope: f64,
        noise: f64,
        switch_day: usize,
    },
    /// A slow sinusoid with light noise.
    Smooth {
        base: f64,
        amplitude: f64,
        period: f64,
        noise: f64,
    },
}

/// Noise in the trending segment of `NoisyRegime`, as a fraction of `noise`.
const TREND_NOISE_FRACTION: f64 = 0.05;
/// Lag-one coefficient of the oscillating segment of `NoisyRegime`.
const OSCILLATION_AR: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    #[serde(flatten)]
    pub kind: SynthKind,
    pub length: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(kind: SynthKind, length: usize, seed: u64) -> Self {
        Self { kind, length, seed }
    }

    /// The regime recipe used throughout the tests: 252 days, switch at day 126.
    pub fn reference_noisy_regime(seed: u64) -> Self {
        Self::new(
            SynthKind::NoisyRegime {
                base: 100.0,
                slope: 1.0,
                noise: 2.0,
                switch_day: 126,
            },
            252,
            seed,
        )
    }

    /// The smooth recipe used throughout the tests: 252 days.
    pub fn reference_smooth(seed: u64) -> Self {
        Self::new(
            SynthKind::Smooth {
                base: 100.0,
                amplitude: 10.0,
                period: 60.0,
                noise: 0.1,
            },
            252,
            seed,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.length == 0 {
            return bad("length must be at least 1".into());
        }
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!(
                    "{name} must be finite, got {v}"
                )))
            }
        };
        let noise_ok = |v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!(
                    "noise amplitude must be finite and >= 0, got {v}"
                )))
            }
        };
        match self.kind {
            SynthKind::Constant { base } => {
                finite("base", base)?;
                if base <= 0.0 {
                    return bad(format!("constant base must be positive, got {base}"));
                }
            }
            SynthKind::Linear { base, slope } => {
                finite("base", base)?;
                finite("slope", slope)?;
            }
            SynthKind::NoisyRegime {
                base,
                slope,
                noise,
                switch_day,
            } => {
                finite("base", base)?;
                finite("slope", slope)?;
                noise_ok(noise)?;
                if switch_day == 0 || switch_day > self.length {
                    return bad(format!(
                        "switch day must lie in [1, {}], got {switch_day}",
                        self.length
                    ));
                }
            }
            SynthKind::Smooth {
                base,
                amplitude,
                period,
                noise,
            } => {
                finite("base", base)?;
                finite("amplitude", amplitude)?;
                noise_ok(noise)?;
                if !(period.is_finite() && period > 0.0) {
                    return bad(format!("period must be positive, got {period}"));
                }
            }
        }
        Ok(())
    }

    pub fn symbol(&self) -> String {
        let name = match self.kind {
            SynthKind::Constant { .. } => "constant",
            SynthKind::Linear { .. } => "linear",
            SynthKind::NoisyRegime { .. } => "noisy-regime",
            SynthKind::Smooth { .. } => "smooth",
        };
        format!("{name}-{}", self.seed)
    }
}

/// Generates the series described by `spec`. Output depends only on `spec`.
pub fn generate(spec: &SynthSpec) -> Result<PriceSeries> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut gauss = move || -> f64 { StandardNormal.sample(&mut rng) };
    let n = spec.length;

    let closes: Vec<f64> = match spec.kind {
        SynthKind::Constant { base } => vec![base; n],
        SynthKind::Linear { base, slope } => (1..=n).map(|t| base + slope * t as f64).collect(),
        SynthKind::NoisyRegime {
            base,
            slope,
            noise,
            switch_day,
        } => {
            let level = base + slope * switch_day as f64;
            let mut deviation = 0.0;
            (1..=n)
                .map(|t| {
                    if t <= switch_day {
                        base + slope * t as f64 + noise * TREND_NOISE_FRACTION * gauss()
                    } else {
                        deviation = OSCILLATION_AR * deviation + noise * gauss();
                        level + deviation
                    }
                })
                .collect()
        }
        SynthKind::Smooth {
            base,
            amplitude,
            period,
            noise,
        } => (1..=n)
            .map(|t| {
                let phase = std::f64::consts::TAU * t as f64 / period;
                base + amplitude * phase.sin() + noise * gauss()
            })
            .collect(),
    };

    let closes: Vec<f64> = closes.into_iter().map(|c| c.max(PRICE_FLOOR)).collect();
    PriceSeries::from_closes(spec.symbol(), &closes)
}
