//! Command-line front end for the volatility estimator library.
//!
//! `estimate` rolls the selected estimators across a daily OHLCV CSV file and
//! writes a long-format estimate series plus a per-window comparison report;
//! `intraday` replays an intraday trade file and streams the trade-by-trade
//! entropy measure after every fill.
//!
//! Exit codes: 0 on success, 1 on input errors (unreadable files, malformed
//! rows, bad flag values), 2 on computation errors (e.g. a series too short
//! for every requested window). All diagnostics go to stderr.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use entrovol::{
    parse_daily_csv, parse_trades_csv, roll, summarize, write_comparison_csv,
    write_series_csv, EntropyMode, EstimateSeries, EstimatorKind, IntradayState,
    ReferencePolicy, ReportDocument, ReportMetadata, RollingConfig, RollingError, Scaling,
};

#[derive(Parser)]
#[command(
    name = "entrovol",
    version,
    about = "Historical volatility estimators over daily OHLCV bars and intraday trades"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roll volatility estimators across a daily OHLCV CSV file.
    Estimate(EstimateArgs),
    /// Stream the cumulative intraday entropy measure over a trade CSV file.
    Intraday(IntradayArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Daily OHLCV CSV file with named columns Date,Open,High,Low,Close,Volume.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,

    /// Symbol recorded in the report metadata.
    #[arg(long, value_name = "SYM")]
    symbol: String,

    /// Window lengths in trading days, comma-separated.
    #[arg(
        long,
        value_name = "N,N,...",
        value_delimiter = ',',
        default_values_t = entrovol::DEFAULT_WINDOWS
    )]
    windows: Vec<usize>,

    /// Estimators to run, comma-separated (cc, parkinson, gk, rs, yz, entropy).
    #[arg(
        long,
        value_name = "NAME,...",
        value_delimiter = ',',
        default_value = "cc,parkinson,gk,rs,yz,entropy"
    )]
    estimators: Vec<String>,

    /// Return convention for the entropy estimator.
    #[arg(long, value_name = "MODE", default_value = "relative")]
    entropy_mode: String,

    /// Last date to include; estimates use only bars at or before it.
    #[arg(long, value_name = "YYYY-MM-DD")]
    anchor: Option<NaiveDate>,

    /// Benchmark estimator for MSE/PB/Efficiency columns.
    #[arg(long, value_name = "NAME", default_value = "cc")]
    benchmark: String,

    /// Scale displayed volatilities by sqrt(252) (variances by 252).
    #[arg(long)]
    annualize: bool,

    /// Output file for the long-format estimate series.
    #[arg(long, value_name = "FILE")]
    out_series: PathBuf,

    /// Output file for the per-window comparison report.
    #[arg(long, value_name = "FILE")]
    out_report: PathBuf,

    /// Output format for both files.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct IntradayArgs {
    /// Trade CSV file with named columns Price,Quantity,Timestamp.
    #[arg(long, value_name = "FILE")]
    trades: PathBuf,

    /// Previous session close, used as the reference price for the first trade.
    #[arg(long, value_name = "PRICE", allow_negative_numbers = true)]
    prev_close: Option<f64>,

    /// Also write the entropy curve to this file (same CSV as stdout).
    #[arg(long, value_name = "FILE")]
    emit_curve: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

/// A failed run, classed by exit code: input errors exit 1, computation
/// errors exit 2.
enum Failure {
    Input(String),
    Compute(String),
}

impl Failure {
    fn input(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Failure {
        Failure::Input(format!("{context}: {err}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap routes help/version to stdout and errors to stderr.
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Estimate(args) => run_estimate(args),
        Command::Intraday(args) => run_intraday(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn open_input(path: &Path) -> Result<impl Read, Failure> {
    File::open(path).map_err(|err| Failure::input(path.display(), err))
}

fn create_output(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|err| Failure::input(path.display(), err))
}

fn finish_output(mut sink: BufWriter<File>, path: &Path) -> Result<(), Failure> {
    sink.flush().map_err(|err| Failure::input(path.display(), err))
}

fn parse_estimators(names: &[String]) -> Result<Vec<EstimatorKind>, Failure> {
    names
        .iter()
        .map(|name| name.parse::<EstimatorKind>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|err| Failure::Input(err.to_string()))
}

fn run_estimate(args: EstimateArgs) -> Result<(), Failure> {
    let estimators = parse_estimators(&args.estimators)?;
    let entropy_mode = args
        .entropy_mode
        .parse::<EntropyMode>()
        .map_err(|err| Failure::Input(err.to_string()))?;
    let benchmark = args
        .benchmark
        .parse::<EstimatorKind>()
        .map_err(|err| Failure::Input(err.to_string()))?;
    if !estimators.contains(&benchmark) {
        return Err(Failure::Input(format!(
            "benchmark `{benchmark}` is not among the selected estimators"
        )));
    }

    let cfg = RollingConfig::new(&args.windows, &estimators, entropy_mode, args.anchor)
        .map_err(|err| match err {
            RollingError::NoWindows | RollingError::WindowTooSmall { .. } => {
                Failure::Input(err.to_string())
            }
            other => Failure::Compute(other.to_string()),
        })?
        .with_benchmark(benchmark);

    let input = open_input(&args.input)?;
    let series = parse_daily_csv(input, &args.symbol)
        .map_err(|err| Failure::input(args.input.display(), err))?;

    let rolled = roll(&series, &cfg)
        .map_err(|err| Failure::Compute(format!("{}: {err}", args.input.display())))?;
    let reports =
        summarize(&rolled, &cfg).map_err(|err| Failure::Compute(err.to_string()))?;

    let scaling = if args.annualize {
        Scaling::Annualized
    } else {
        Scaling::Daily
    };
    let meta = ReportMetadata {
        symbol: args.symbol.clone(),
        anchor_date: args.anchor,
        entropy_mode,
        benchmark,
        scaling,
        tool_version: entrovol::VERSION.to_string(),
    };

    let mut series_sink = create_output(&args.out_series)?;
    match args.format {
        OutputFormat::Csv => {
            let all_series: Vec<&EstimateSeries> =
                rolled.results().values().map(|rs| &rs.series).collect();
            write_series_csv(&all_series, scaling, &mut series_sink)
                .map_err(|err| Failure::input(args.out_series.display(), err))?;
        }
        OutputFormat::Json => {
            ReportDocument::series(&rolled, &meta)
                .write_to(&mut series_sink)
                .map_err(|err| Failure::input(args.out_series.display(), err))?;
        }
    }
    finish_output(series_sink, &args.out_series)?;

    let mut report_sink = create_output(&args.out_report)?;
    match args.format {
        OutputFormat::Csv => {
            write_comparison_csv(&reports, scaling, &mut report_sink)
                .map_err(|err| Failure::input(args.out_report.display(), err))?;
        }
        OutputFormat::Json => {
            ReportDocument::comparison(&reports, &rolled, &meta)
                .write_to(&mut report_sink)
                .map_err(|err| Failure::input(args.out_report.display(), err))?;
        }
    }
    finish_output(report_sink, &args.out_report)
}

fn run_intraday(args: IntradayArgs) -> Result<(), Failure> {
    if let Some(price) = args.prev_close {
        if !(price.is_finite() && price > 0.0) {
            return Err(Failure::Input(format!(
                "--prev-close must be a positive finite price, got {price}"
            )));
        }
    }

    let input = open_input(&args.trades)?;
    let trades = parse_trades_csv(input)
        .map_err(|err| Failure::input(args.trades.display(), err))?;

    let mut state = IntradayState::new(ReferencePolicy::PreviousTrade {
        session_reference: args.prev_close,
    });

    let mut curve = String::from("seq,timestamp_ms,entropy\n");
    for trade in &trades {
        state
            .push_trade(trade)
            .map_err(|err| Failure::Compute(format!("trade {}: {err}", trade.seq)))?;
        let entropy = state
            .entropy_at()
            .map_err(|err| Failure::Compute(format!("trade {}: {err}", trade.seq)))?;
        curve.push_str(&format!(
            "{},{},{}\n",
            trade.seq,
            trade.timestamp_ms,
            entrovol::fmt8(entropy)
        ));
    }

    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(curve.as_bytes())
        .and_then(|()| lock.flush())
        .map_err(|err| Failure::input("stdout", err))?;

    if let Some(path) = &args.emit_curve {
        let mut sink = create_output(path)?;
        sink.write_all(curve.as_bytes())
            .map_err(|err| Failure::input(path.display(), err))?;
        finish_output(sink, path)?;
    }
    Ok(())
}
