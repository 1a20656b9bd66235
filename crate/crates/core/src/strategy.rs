//! Named strategies and side-by-side evaluation on common days.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ea::{ea_run, EaConfig};
use crate::er::{er_run, ErConfig};
use crate::error::{Error, Result};
use crate::market_data::PriceSeries;
use crate::metrics::{SelectionTrace, TraceRow};
use crate::predictors::{MethodId, PredictorRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Ea,
    Er,
    Ma,
    Lr,
    Naive,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [Self::Ea, Self::Er, Self::Ma, Self::Lr, Self::Naive];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ea => "ea",
            Self::Er => "er",
            Self::Ma => "ma",
            Self::Lr => "lr",
            Self::Naive => "naive",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown strategy `{s}`")))
    }
}

/// Everything a strategy run needs besides the series.
#[derive(Debug, Clone)]
pub struct Settings {
    pub registry: PredictorRegistry,
    pub ea: EaConfig,
    pub er: ErConfig,
}

impl Settings {
    pub fn new(registry: PredictorRegistry, ea: EaConfig, er: ErConfig) -> Self {
        Self { registry, ea, er }
    }

    /// Standard registry with window `window`, default EA and ER parameters.
    pub fn standard(window: usize, include_naive: bool) -> Result<Self> {
        Ok(Self::new(
            PredictorRegistry::standard(window, include_naive)?,
            EaConfig::default(),
            ErConfig::default(),
        ))
    }

    fn fixed_method(&self, strategy: Strategy) -> Result<MethodId> {
        self.registry.id_of(strategy.name()).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "strategy `{strategy}` is not in the predictor registry"
            ))
        })
    }

    /// First decision day of a strategy.
    pub fn warmup(&self, strategy: Strategy) -> Result<usize> {
        match strategy {
            Strategy::Ea => Ok(self.ea.warmup(&self.registry)),
            Strategy::Er => Ok(self.er.warmup(&self.registry)),
            fixed => {
                let id = self.fixed_method(fixed)?;
                Ok(self.registry.get(id)?.history())
            }
        }
    }

    pub fn validate(&self, strategy: Strategy) -> Result<()> {
        match strategy {
            Strategy::Ea => self.ea.validate(&self.registry),
            Strategy::Er => self.er.validate(&self.registry),
            fixed => self.fixed_method(fixed).map(|_| ()),
        }
    }
}

/// Predicts every day after `warmup` with a single registered method.
pub fn fixed_run(
    series: &PriceSeries,
    registry: &PredictorRegistry,
    id: MethodId,
    warmup: usize,
) -> Result<SelectionTrace> {
    let predictor = registry.get(id)?;
    if warmup < predictor.history() {
        return Err(Error::InvalidConfig(format!(
            "warmup {warmup} is shorter than the {} window of {}",
            predictor.history(),
            predictor.name()
        )));
    }
    if series.len() <= warmup {
        return Err(Error::SeriesTooShort {
            needed: warmup + 1,
            len: series.len(),
        });
    }
    let rows = (warmup..series.len())
        .map(|t| {
            let predicted = predictor.predict(series, t)?;
            let actual = series.close(t + 1).expect("t + 1 <= len");
            Ok(TraceRow::new(t + 1, id, predicted, actual))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SelectionTrace::new(rows))
}

pub fn run_strategy(
    strategy: Strategy,
    series: &PriceSeries,
    settings: &Settings,
) -> Result<SelectionTrace> {
    match strategy {
        Strategy::Ea => ea_run(series, &settings.registry, &settings.ea),
        Strategy::Er => er_run(series, &settings.registry, &settings.er),
        fixed => {
            let id = settings.fixed_method(fixed)?;
            fixed_run(series, &settings.registry, id, settings.warmup(fixed)?)
        }
    }
}

/// Runs each strategy and keeps only the days every strategy predicts, so
/// metrics are computed over identical evaluation days. Strategies are
/// evaluated on separate threads.
pub fn run_aligned(
    strategies: &[Strategy],
    series: &PriceSeries,
    settings: &Settings,
) -> Result<Vec<(Strategy, SelectionTrace)>> {
    if strategies.is_empty() {
        return Err(Error::InvalidConfig("no strategy selected".into()));
    }
    for (i, s) in strategies.iter().enumerate() {
        if strategies[..i].contains(s) {
            return Err(Error::InvalidConfig(format!("strategy `{s}` listed twice")));
        }
        settings.validate(*s)?;
    }
    let start = strategies
        .iter()
        .map(|&s| settings.warmup(s))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .expect("non-empty");

    let traces: Vec<Result<SelectionTrace>> = std::thread::scope(|scope| {
        let handles: Vec<_> = strategies
            .iter()
            .map(|&s| scope.spawn(move || run_strategy(s, series, settings)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("strategy thread panicked"))
            .collect()
    });

    strategies
        .iter()
        .zip(traces)
        .map(|(&s, trace)| Ok((s, trace?.from_day(start + 1))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("svr".parse::<Strategy>().is_err());
    }

    #[test]
    fn aligned_runs_share_days() {
        let closes: Vec<f64> = (1..=60).map(|x| 10.0 + (x as f64 * 0.7).sin()).collect();
        let s = PriceSeries::from_closes("S", &closes).unwrap();
        let settings = Settings::standard(5, true).unwrap();
        let runs = run_aligned(&Strategy::ALL, &s, &settings).unwrap();
        for (_, t) in &runs {
            assert_eq!(t.first_day(), Some(26));
            assert_eq!(t.len(), 35);
        }
    }

    #[test]
    fn naive_requires_registration() {
        let s = PriceSeries::from_closes("S", &[1.0; 40]).unwrap();
        let settings = Settings::standard(5, false).unwrap();
        assert!(matches!(
            run_strategy(Strategy::Naive, &s, &settings),
            Err(Error::InvalidConfig(_))
        ));
        assert!(run_aligned(&[Strategy::Ma, Strategy::Ma], &s, &settings).is_err());
    }

    #[test]
    fn fixed_runs_start_at_window() {
        let s = PriceSeries::from_closes("S", &[3.0, 5.0, 7.0, 9.0, 11.0, 13.0, 15.0]).unwrap();
        let settings = Settings::standard(5, true).unwrap();
        let lr = run_strategy(Strategy::Lr, &s, &settings).unwrap();
        assert_eq!(lr.first_day(), Some(6));
        assert!(lr.rows.iter().all(|r| r.abs_err < 1e-9));
        let naive = run_strategy(Strategy::Naive, &s, &settings).unwrap();
        assert_eq!(naive.first_day(), Some(2));
    }
}
