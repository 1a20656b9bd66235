//! Command-line front end: `predict`, `compare`, `backtest` and `synth`.
//!
//! Exit codes: 0 on success, 1 for configuration errors (bad flags, invalid
//! synthetic spec), 2 for data errors (unreadable or malformed input, series
//! too short). Nothing is written to `--out` unless the command succeeds.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ea::EaConfig;
use crate::er::ErConfig;
use crate::error::{Error, Result};
use crate::market_data::{generate, load_csv, write_csv, PriceSeries, SynthKind, SynthSpec};
use crate::predictors::{PredictorRegistry, DEFAULT_WINDOW};
use crate::report::{EvaluationReport, RunConfig, Source};
use crate::strategy::{Settings, Strategy};

#[derive(Debug, Parser)]
#[command(
    name = "forecast-select",
    version,
    about = "Meta-selection of simple stock price predictors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one strategy and report its errors and backtest.
    Predict(RunArgs),
    /// Run two or more strategies on identical evaluation days.
    Compare(RunArgs),
    /// Backtest strategies against the real-price benchmark.
    Backtest(RunArgs),
    /// Write a synthetic series as `date,close` CSV.
    Synth(SynthOnlyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Constant,
    Linear,
    NoisyRegime,
    Smooth,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Synthetic series kind (used when --csv is absent).
    #[arg(long)]
    pub kind: Option<KindArg>,
    #[arg(long, default_value_t = 252)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub base: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub slope: Option<f64>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub switch_day: Option<usize>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub period: Option<f64>,
}

impl SynthArgs {
    /// Unset parameters fall back to the reference recipe of the chosen kind.
    pub fn spec(&self, kind: KindArg) -> SynthSpec {
        let kind = match kind {
            KindArg::Constant => SynthKind::Constant {
                base: self.base.unwrap_or(100.0),
            },
            KindArg::Linear => SynthKind::Linear {
                base: self.base.unwrap_or(100.0),
                slope: self.slope.unwrap_or(1.0),
            },
            KindArg::NoisyRegime => {
                let SynthKind::NoisyRegime {
                    base, slope, noise, ..
                } = SynthSpec::reference_noisy_regime(0).kind
                else {
                    unreachable!()
                };
                SynthKind::NoisyRegime {
                    base: self.base.unwrap_or(base),
                    slope: self.slope.unwrap_or(slope),
                    noise: self.noise.unwrap_or(noise),
                    switch_day: self.switch_day.unwrap_or(self.length.div_ceil(2)),
                }
            }
            KindArg::Smooth => {
                let SynthKind::Smooth {
                    base,
                    amplitude,
                    period,
                    noise,
                } = SynthSpec::reference_smooth(0).kind
                else {
                    unreachable!()
                };
                SynthKind::Smooth {
                    base: self.base.unwrap_or(base),
                    amplitude: self.amplitude.unwrap_or(amplitude),
                    period: self.period.unwrap_or(period),
                    noise: self.noise.unwrap_or(noise),
                }
            }
        };
        SynthSpec::new(kind, self.length, self.seed)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthOnlyArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Input `date,close` CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub synth: SynthArgs,
    /// Comma-separated strategies: ea, er, ma, lr, naive.
    #[arg(long, value_delimiter = ',', default_value = "ea")]
    pub strategy: Vec<String>,
    /// Window of the moving-average and linear-regression predictors.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Leave the persistence predictor out of the registry.
    #[arg(long)]
    pub no_naive: bool,
    #[arg(long, default_value_t = 20)]
    pub ea_k: usize,
    #[arg(long, default_value_t = 5)]
    pub ea_p: usize,
    #[arg(long, default_value_t = 10)]
    pub ea_kshort: usize,
    #[arg(long, default_value_t = 3)]
    pub er_window: usize,
    /// Signal threshold as a fraction of today's close.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Error annotated with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_data_error() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

impl RunArgs {
    fn strategies(&self) -> Result<Vec<Strategy>> {
        self.strategy.iter().map(|s| s.trim().parse()).collect()
    }

    fn settings(&self) -> Result<Settings> {
        if !(self.theta.is_finite() && self.theta >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "--theta must be >= 0, got {}",
                self.theta
            )));
        }
        let registry = PredictorRegistry::standard(self.window, !self.no_naive)?;
        let ea = EaConfig {
            k: self.ea_k,
            p: self.ea_p,
            k_short: self.ea_kshort,
            warmup: None,
        };
        let er = ErConfig {
            w: self.er_window,
            warmup: None,
        };
        Ok(Settings::new(registry, ea, er))
    }

    fn load(&self) -> std::result::Result<(Source, PriceSeries), Failure> {
        match (&self.csv, self.synth.kind) {
            (Some(_), Some(_)) => Err(config_error("give either --csv or --kind, not both")),
            (None, None) => Err(config_error(
                "an input is required: --csv PATH or --kind KIND",
            )),
            (Some(path), None) => {
                let series = load_csv(path)?;
                Ok((Source::Csv(path.display().to_string()), series))
            }
            (None, Some(kind)) => {
                let spec = self.synth.spec(kind);
                let series = generate(&spec)?;
                Ok((Source::Synth(spec), series))
            }
        }
    }
}

fn evaluate(
    args: &RunArgs,
    min: usize,
    max: Option<usize>,
    command: &str,
) -> std::result::Result<EvaluationReport, Failure> {
    let strategies = args.strategies()?;
    if strategies.len() < min || max.is_some_and(|m| strategies.len() > m) {
        let want = match max {
            Some(m) if m == min => format!("exactly {min}"),
            _ => format!("at least {min}"),
        };
        return Err(config_error(format!(
            "`{command}` needs {want} strategies, got {}",
            strategies.len()
        )));
    }
    let settings = args.settings()?;
    for s in &strategies {
        settings.validate(*s)?;
    }
    let (source, series) = args.load()?;
    let config = RunConfig {
        source,
        symbol: series.symbol().to_string(),
        strategies,
        registry: settings
            .registry
            .entries()
            .into_iter()
            .map(Into::into)
            .collect(),
        ea: settings.ea,
        er: settings.er,
        theta: args.theta,
    };
    Ok(EvaluationReport::evaluate(&series, &settings, config)?)
}

fn emit(out: Option<&PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| {
            Failure::from(Error::Io {
                path: path.clone(),
                source,
            })
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure {
                code: 2,
                message: e.to_string(),
            }),
    }
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Command::Predict(args) => {
            let report = evaluate(args, 1, Some(1), "predict")?;
            let text = match args.format {
                Format::Json => report.to_json(),
                Format::Csv => report.trace_csv(),
            };
            emit(args.out.as_ref(), &text)
        }
        Command::Compare(args) => {
            let report = evaluate(args, 2, None, "compare")?;
            let text = match args.format {
                Format::Json => report.to_json(),
                Format::Csv => report.trace_csv(),
            };
            emit(args.out.as_ref(), &text)
        }
        Command::Backtest(args) => {
            let report = evaluate(args, 1, None, "backtest")?;
            let text = match args.format {
                Format::Json => report.to_json(),
                Format::Csv => report.trades_csv(),
            };
            emit(args.out.as_ref(), &text)
        }
        Command::Synth(args) => {
            let kind = args
                .synth
                .kind
                .ok_or_else(|| config_error("`synth` needs --kind"))?;
            let series = generate(&args.synth.spec(kind))?;
            let mut buf = Vec::new();
            write_csv(&series, &mut buf).expect("writing to a Vec cannot fail");
            emit(
                args.out.as_ref(),
                &String::from_utf8(buf).expect("CSV is UTF-8"),
            )
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("forecast-select").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn strategy_lists_parse() {
        let cli = parse(&["compare", "--kind", "smooth", "--strategy", "ea,er,ma,lr"]);
        let Command::Compare(args) = cli.command else {
            panic!()
        };
        assert_eq!(
            args.strategies().unwrap(),
            vec![Strategy::Ea, Strategy::Er, Strategy::Ma, Strategy::Lr]
        );
    }

    #[test]
    fn synth_defaults_follow_reference_recipes() {
        let cli = parse(&["synth", "--kind", "noisy-regime", "--seed", "4"]);
        let Command::Synth(args) = cli.command else {
            panic!()
        };
        assert_eq!(
            args.synth.spec(KindArg::NoisyRegime),
            SynthSpec::reference_noisy_regime(4)
        );
        assert_eq!(
            args.synth.spec(KindArg::Smooth),
            SynthSpec::reference_smooth(4)
        );
    }

    #[test]
    fn config_errors_map_to_one() {
        let cli = parse(&["predict", "--kind", "constant", "--strategy", "ea,er"]);
        assert_eq!(execute(&cli).unwrap_err().code, 1);
        let cli = parse(&["compare", "--kind", "constant", "--strategy", "ea"]);
        assert_eq!(execute(&cli).unwrap_err().code, 1);
        let cli = parse(&["predict", "--strategy", "svr", "--kind", "constant"]);
        assert_eq!(execute(&cli).unwrap_err().code, 1);
        let cli = parse(&["predict", "--strategy", "ma"]);
        assert_eq!(execute(&cli).unwrap_err().code, 1);
        let cli = parse(&["synth", "--kind", "constant", "--length", "0"]);
        assert_eq!(execute(&cli).unwrap_err().code, 1);
    }

    #[test]
    fn short_series_is_data_error() {
        let cli = parse(&[
            "predict",
            "--kind",
            "constant",
            "--length",
            "10",
            "--strategy",
            "ea",
        ]);
        assert_eq!(execute(&cli).unwrap_err().code, 2);
    }
}
